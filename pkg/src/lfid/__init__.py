"""Loop-free inport-dependent (LFID) multipath FIB computation.

Builds per-destination nexthop sets with the LFID pipeline and with the
ECMP / DW / DWE baselines, then evaluates loop-freedom, path diversity,
stretch and failure resilience.
"""

__version__ = "0.1.0"

from .topology import (  # noqa: E402
    Link,
    Topology,
    TopologyError,
    bundled_topology,
    load_topology,
    random_connected_graph,
    read_topology,
)
from .fib import AllNodeFib, NexthopEntry, NexthopKind, fill_fib  # noqa: E402
from .pipeline import compute_lfid, remove_dead_ends, remove_loops  # noqa: E402
from .baselines import compute_dw, compute_dwe, compute_ecmp  # noqa: E402
from .algorithms import ALGORITHMS, compute_fib  # noqa: E402
from .forwarding import (  # noqa: E402
    FailureSet,
    ForwardingState,
    cheapest_recovery_path,
    enumerate_all_walks,
    recovery_exists,
    viable_nexthops,
)
from .estimators import (  # noqa: E402
    DownwardEqualRouter,
    DownwardRouter,
    ECMPRouter,
    LFIDRouter,
    check_topology,
)

__all__ = [
    "ALGORITHMS",
    "AllNodeFib",
    "DownwardEqualRouter",
    "DownwardRouter",
    "ECMPRouter",
    "FailureSet",
    "ForwardingState",
    "LFIDRouter",
    "Link",
    "NexthopEntry",
    "NexthopKind",
    "Topology",
    "TopologyError",
    "bundled_topology",
    "cheapest_recovery_path",
    "check_topology",
    "compute_dw",
    "compute_dwe",
    "compute_ecmp",
    "compute_fib",
    "compute_lfid",
    "enumerate_all_walks",
    "fill_fib",
    "load_topology",
    "random_connected_graph",
    "read_topology",
    "recovery_exists",
    "remove_dead_ends",
    "remove_loops",
    "viable_nexthops",
]
