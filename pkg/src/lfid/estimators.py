"""Estimator-style wrappers around the routing algorithms.

Each router follows the scikit-learn conventions: hyperparameters in
``__init__``, ``fit(topology)`` stores the result in trailing-underscore
attributes, ``predict`` answers nexthop queries. ``get_params`` /
``set_params`` / ``clone`` come from :class:`sklearn.base.BaseEstimator`.
"""

from __future__ import annotations

from decimal import Decimal
from typing import Iterable

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .baselines import compute_dw, compute_dwe, compute_ecmp
from .fib import EXCISED, FULL_GRAPH
from .pipeline import compute_lfid
from .topology import MILLI, Topology, TopologyError, load_topology


def check_topology(X) -> Topology:
    """Coerce ``X`` into a :class:`Topology`.

    Accepts a Topology, edge-list text, or an iterable of ``(a, b)`` /
    ``(a, b, weight)`` tuples with weights in natural units.
    """
    if isinstance(X, Topology):
        return X
    if isinstance(X, str):
        return load_topology(X)
    try:
        edges = list(X)
    except TypeError:
        raise TypeError(f"cannot interpret {type(X).__name__} as a topology") from None
    if not edges:
        raise TopologyError("no links found")
    ids: dict = {}
    links = []
    for edge in edges:
        if len(edge) not in (2, 3):
            raise TopologyError(f"edge {edge!r} must be (a, b) or (a, b, weight)")
        a, b = ids.setdefault(edge[0], len(ids)), ids.setdefault(edge[1], len(ids))
        w = Decimal(str(edge[2])) if len(edge) == 3 else Decimal(1)
        if w.as_tuple().exponent < -3:
            raise TopologyError(f"weight {edge[2]!r} has more than 3 fractional digits")
        links.append((a, b, int(w * MILLI)))
    labels = [str(k) for k in sorted(ids, key=ids.__getitem__)]
    return Topology.from_links(len(ids), links, labels)


def _check_pairs(pairs, n: int) -> list[tuple[int, int]]:
    out = []
    for pair in pairs:
        node, dest = (int(v) for v in pair)
        if not (0 <= node < n and 0 <= dest < n):
            raise ValueError(f"pair {pair!r} outside node range 0..{n - 1}")
        out.append((node, dest))
    return out


class _Router(BaseEstimator):
    def fit(self, X, y=None):
        if self.n_jobs < 1:
            raise ValueError("n_jobs must be >= 1")
        topology = check_topology(X)
        self.topology_ = topology
        self.n_nodes_ = topology.n
        self.fib_ = self._compute(topology)
        return self

    def predict(self, X: Iterable[tuple[int, int]]) -> list[tuple[int, ...]]:
        """Nexthop ids, cheapest first, for each ``(node, dest)`` pair in ``X``."""
        check_is_fitted(self, "fib_")
        return [tuple(self.fib_.nexthops(x, d)) for x, d in _check_pairs(X, self.n_nodes_)]

    def to_csv(self) -> str:
        check_is_fitted(self, "fib_")
        return self.fib_.to_csv(self.topology_)


class ECMPRouter(_Router):
    def __init__(self, n_jobs: int = 1):
        self.n_jobs = n_jobs

    def _compute(self, topology):
        return compute_ecmp(topology, workers=self.n_jobs)


class DownwardRouter(_Router):
    def __init__(self, n_jobs: int = 1):
        self.n_jobs = n_jobs

    def _compute(self, topology):
        return compute_dw(topology, workers=self.n_jobs)


class DownwardEqualRouter(_Router):
    def __init__(self, n_jobs: int = 1):
        self.n_jobs = n_jobs

    def _compute(self, topology):
        return compute_dwe(topology, workers=self.n_jobs)


class LFIDRouter(_Router):
    """LFID nexthop sets.

    Parameters
    ----------
    classification : {"excised", "full"}
        Whether a neighbour counts as downward by its cost with the current
        node removed (default) or by its full-graph cost.
    n_jobs : int
        Worker processes for the per-node and per-destination stages.
    """

    def __init__(self, classification: str = EXCISED, n_jobs: int = 1):
        self.classification = classification
        self.n_jobs = n_jobs

    def _compute(self, topology):
        if self.classification not in (EXCISED, FULL_GRAPH):
            raise ValueError(f"classification must be {EXCISED!r} or {FULL_GRAPH!r}")
        return compute_lfid(topology, classification=self.classification, workers=self.n_jobs)
