"""DAG-style baselines: ECMP, downward (DW) and downward+equal (DWE).

All entries produced here are downward, with cost ``w(x, n) + sp(n, d)``
computed on the full graph.
"""

from __future__ import annotations

from .fib import DOWNWARD, AllNodeFib, NexthopEntry
from .parallel import pmap
from .shortest_paths import sssp
from .topology import Topology

ECMP = "ecmp"
DW = "dw"
DWE = "dwe"


def _admit(rule, sp_x, sp_n, w, n, x) -> bool:
    if rule == ECMP:
        return w + sp_n == sp_x
    if rule == DW:
        return sp_n < sp_x
    if rule == DWE:
        return sp_n < sp_x or (sp_n == sp_x and n < x)
    raise ValueError(f"unknown rule {rule!r}")


def _node_lists(topology: Topology, rule: str, costs, x: int):
    out = [[] for _ in range(topology.n)]
    sp_x = costs[x]
    for d, cx in sp_x.items():
        if d == x:
            continue
        lst = [
            NexthopEntry(n, w + costs[n][d], DOWNWARD)
            for n, w in topology.adjacency[x]
            if _admit(rule, cx, costs[n][d], w, n, x)
        ]
        lst.sort(key=lambda e: e.sort_key)
        out[d] = lst
    return out


def _compute(topology: Topology, rule: str, workers: int) -> AllNodeFib:
    costs = [sssp(topology.adjacency, s) for s in range(topology.n)]
    per_node = pmap(_node_lists, range(topology.n), workers, topology, rule, costs)
    fib = AllNodeFib(topology.n)
    for x, lists in enumerate(per_node):
        for d, lst in enumerate(lists):
            fib.table[d][x] = lst
    return fib


def compute_ecmp(topology: Topology, workers: int = 1) -> AllNodeFib:
    """Neighbours on some shortest path: ``w(x, n) + sp(n, d) == sp(x, d)``."""
    return _compute(topology, ECMP, workers)


def compute_dw(topology: Topology, workers: int = 1) -> AllNodeFib:
    """Neighbours strictly closer to the destination than ``x``."""
    return _compute(topology, DW, workers)


def compute_dwe(topology: Topology, workers: int = 1) -> AllNodeFib:
    """DW plus equal-distance neighbours with a lower node id."""
    return _compute(topology, DWE, workers)


def compute_mara_mc(topology: Topology, workers: int = 1) -> AllNodeFib:
    raise NotImplementedError("MARA-MC is not implemented")


def compute_mara_spe(topology: Topology, workers: int = 1) -> AllNodeFib:
    raise NotImplementedError("MARA-SPE is not implemented")
