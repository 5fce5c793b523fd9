"""FIB data model and population of nexthop entries (downward / upward)."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .shortest_paths import sssp
from .topology import Topology

EXCISED = "excised"
FULL_GRAPH = "full"


class NexthopKind(enum.Enum):
    DOWNWARD = "DW"
    UPWARD = "UW"

    def __str__(self) -> str:
        return self.value


DOWNWARD = NexthopKind.DOWNWARD
UPWARD = NexthopKind.UPWARD


@dataclass(frozen=True)
class NexthopEntry:
    neighbor: int
    cost: int
    kind: NexthopKind = DOWNWARD
    split: Optional[float] = None

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.cost, self.neighbor)


class AllNodeFib:
    """Nexthop entries for every (node, destination) pair.

    Entries are stored per destination (``table[dst][node]``) because every
    pipeline stage after population works one destination at a time. Each
    list is kept sorted by ``(cost, neighbor)``.
    """

    __slots__ = ("n", "table")

    def __init__(self, n: int, table: Optional[list[list[list[NexthopEntry]]]] = None):
        self.n = n
        self.table = table if table is not None else [[[] for _ in range(n)] for _ in range(n)]

    def entries(self, node: int, dest: int) -> list[NexthopEntry]:
        return self.table[dest][node]

    def nexthops(self, node: int, dest: int) -> list[int]:
        return [e.neighbor for e in self.table[dest][node]]

    def entry(self, node: int, dest: int, neighbor: int) -> Optional[NexthopEntry]:
        for e in self.table[dest][node]:
            if e.neighbor == neighbor:
                return e
        return None

    def set_entries(self, node: int, dest: int, entries: Iterable[NexthopEntry]) -> None:
        self.table[dest][node] = sorted(entries, key=lambda e: e.sort_key)

    def remove(self, node: int, dest: int, neighbor: int) -> None:
        self.table[dest][node] = [e for e in self.table[dest][node] if e.neighbor != neighbor]

    def arcs(self, dest: int) -> Iterator[tuple[int, int]]:
        for node, lst in enumerate(self.table[dest]):
            for e in lst:
                yield node, e.neighbor

    def weighted_arcs(self, dest: int, topology: Topology) -> dict[int, list[tuple[int, int]]]:
        """Arc map for ``dest`` with link weights, as consumed by the path kernels."""
        return {
            node: [(e.neighbor, topology.weight(node, e.neighbor)) for e in lst]
            for node, lst in enumerate(self.table[dest])
            if lst
        }

    def rows(self) -> Iterator[tuple[int, int, NexthopEntry]]:
        """(node, dest, entry) sorted by node, dest, cost, nexthop."""
        for node in range(self.n):
            for dest in range(self.n):
                for e in self.table[dest][node]:
                    yield node, dest, e

    def entry_set(self) -> set[tuple[int, int, int]]:
        return {(node, dest, e.neighbor) for node, dest, e in self.rows()}

    def count(self, kind: Optional[NexthopKind] = None) -> int:
        return sum(
            1 for col in self.table for lst in col for e in lst if kind is None or e.kind is kind
        )

    def copy(self) -> "AllNodeFib":
        return AllNodeFib(self.n, [[list(lst) for lst in col] for col in self.table])

    def __eq__(self, other) -> bool:
        return isinstance(other, AllNodeFib) and self.n == other.n and self.table == other.table

    def __repr__(self) -> str:
        return f"AllNodeFib(n={self.n}, entries={self.count()})"

    def to_csv(self, topology: Optional[Topology] = None) -> str:
        """Dump as ``node,dest,nexthop,cost_milli,kind`` rows.

        Node columns use topology labels when a topology is given.
        """
        name = (lambda i: topology.labels[i]) if topology is not None else str
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["node", "dest", "nexthop", "cost_milli", "kind"])
        for node, dest, e in self.rows():
            writer.writerow([name(node), name(dest), name(e.neighbor), e.cost, e.kind.value])
        return out.getvalue()


def fill_node(topology: Topology, x: int, classification: str = EXCISED,
              full_costs: Optional[list[dict[int, int]]] = None) -> list[list[NexthopEntry]]:
    """FIB lists of node ``x`` toward every destination.

    Neighbour costs are computed with ``x`` removed from the graph, so a
    neighbour that could only reach the destination back through ``x`` is
    left out. A neighbour is downward when that cost is strictly below
    ``x``'s own shortest-path cost, upward otherwise.
    """
    adj = topology.adjacency
    sp = sssp(adj, x)
    excised = [(n, w, sssp(adj, n, excluded=x)) for n, w in adj[x]]
    if classification == FULL_GRAPH:
        if full_costs is None:
            compare = {n: sssp(adj, n) for n, _ in adj[x]}
        else:
            compare = {n: full_costs[n] for n, _ in adj[x]}
    elif classification == EXCISED:
        compare = None
    else:
        raise ValueError(f"unknown classification {classification!r}")

    out: list[list[NexthopEntry]] = [[] for _ in range(topology.n)]
    for dst, sp_cost in sp.items():
        if dst == x:
            continue
        lst = []
        for n, w, costs in excised:
            ncost = costs.get(dst)
            if ncost is None:
                continue
            ref = ncost if compare is None else compare[n][dst]
            kind = DOWNWARD if ref < sp_cost else UPWARD
            lst.append(NexthopEntry(n, ncost + w, kind))
        lst.sort(key=lambda e: e.sort_key)
        out[dst] = lst
    return out


def fill_fib(topology: Topology, classification: str = EXCISED, workers: int = 1) -> AllNodeFib:
    """Populate downward and upward entries for all nodes and destinations.

    ``classification="full"`` compares full-graph neighbour costs instead of
    the node-excised ones; entry costs are the same either way.
    """
    from .parallel import map_nodes

    full = None
    if classification == FULL_GRAPH:
        full = [sssp(topology.adjacency, s) for s in range(topology.n)]
    per_node = map_nodes(fill_node, topology, range(topology.n), workers,
                         classification=classification, full_costs=full)
    fib = AllNodeFib(topology.n)
    for x, lists in zip(range(topology.n), per_node):
        for dst, lst in enumerate(lists):
            fib.table[dst][x] = lst
    return fib
