"""Loop removal, dead-end pruning and the assembled LFID pipeline.

Only upward entries are ever deleted here. Every destination is processed
independently, so the per-destination stages fan out across workers.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .digraph import DestinationDigraph
from .fib import EXCISED, UPWARD, AllNodeFib, NexthopEntry, fill_fib
from .parallel import pmap
from .shortest_paths import is_reachable
from .topology import Topology

Column = list[list[NexthopEntry]]


@dataclass
class NodePriority:
    """Queue state of one node during loop removal for a single destination.

    ``upward_set`` holds the upward entries not yet loop-checked, costliest
    first (ties: lower neighbour id first).
    """

    node: int
    remaining_total_nexthops: int
    upward_set: list[NexthopEntry] = field(default_factory=list)

    def key(self) -> tuple[int, int, int]:
        # heapq is a min-heap: most entries first, then costliest upward, then lowest id
        return (-self.remaining_total_nexthops, -self.upward_set[0].cost, self.node)


def _digraph(column: Column, dest: int) -> DestinationDigraph:
    return DestinationDigraph(
        dest, ((x, e.neighbor) for x, lst in enumerate(column) for e in lst)
    )


def remove_loops_for_destination(
    column: Column, dest: int, trace: Optional[list] = None
) -> Column:
    """Drop every upward entry ``x -> n`` from which ``n`` can get back to ``x``.

    ``column[x]`` is node ``x``'s entry list toward ``dest``. The check for
    ``x -> n`` temporarily removes the reverse arc ``n -> x`` and searches
    for another path ``n ~> x``; the reverse arc is put back only if it was
    present before the check. ``trace`` collects ``(x, n, removed)`` for each
    examined entry.
    """
    lists = [list(lst) for lst in column]
    dg = _digraph(lists, dest)

    heap = []
    prio: dict[int, NodePriority] = {}
    for x, lst in enumerate(lists):
        ups = sorted((e for e in lst if e.kind is UPWARD), key=lambda e: (-e.cost, e.neighbor))
        if ups:
            prio[x] = NodePriority(x, len(lst), ups)
            heapq.heappush(heap, prio[x].key())

    while heap:
        x = heapq.heappop(heap)[2]
        p = prio[x]
        entry = p.upward_set.pop(0)
        n = entry.neighbor

        had_reverse = dg.has_arc(n, x)
        if had_reverse:
            dg.discard(n, x)
        loops = is_reachable(dg, n, x)
        if loops:
            lists[x].remove(entry)
            dg.discard(x, n)
            p.remaining_total_nexthops -= 1
        if had_reverse:
            dg.add(n, x)
        if trace is not None:
            trace.append((x, n, loops))

        if p.upward_set:
            heapq.heappush(heap, p.key())
    return lists


def remove_dead_ends_for_destination(column: Column, dest: int) -> Column:
    """Prune upward entries leading to a node whose only entry points straight back."""
    lists = [list(lst) for lst in column]
    dg = _digraph(lists, dest)

    def upward_into(x):
        out = []
        for y in sorted(dg.pred.get(x, ())):
            e = _find(lists[y], x)
            if e is not None and e.kind is UPWARD:
                out.append((y, x))
        return out

    work = deque(
        (x, e.neighbor) for x, lst in enumerate(lists) for e in lst if e.kind is UPWARD
    )
    queued = set(work)
    while work:
        item = work.popleft()
        queued.discard(item)
        x, n = item
        entry = _find(lists[x], n)
        if entry is None:
            continue
        target = lists[n]
        if len(target) == 1 and target[0].neighbor == x:
            lists[x].remove(entry)
            dg.discard(x, n)
            for follow in upward_into(x):
                if follow not in queued:
                    queued.add(follow)
                    work.append(follow)
    return lists


def _find(lst, neighbor):
    for e in lst:
        if e.neighbor == neighbor:
            return e
    return None


def _apply(fib: AllNodeFib, stage, workers: int) -> AllNodeFib:
    columns = pmap(_stage_column, range(fib.n), workers, fib, stage)
    return AllNodeFib(fib.n, columns)


def _stage_column(fib: AllNodeFib, stage, dest: int) -> Column:
    return stage(fib.table[dest], dest)


def remove_loops(fib: AllNodeFib, topology: Optional[Topology] = None, workers: int = 1) -> AllNodeFib:
    """Loop-check every upward entry of every destination. Returns a new FIB."""
    return _apply(fib, remove_loops_for_destination, workers)


def remove_dead_ends(fib: AllNodeFib, workers: int = 1) -> AllNodeFib:
    return _apply(fib, remove_dead_ends_for_destination, workers)


def _lfid_column(column: Column, dest: int) -> Column:
    return remove_dead_ends_for_destination(remove_loops_for_destination(column, dest), dest)


def compute_lfid(topology: Topology, classification: str = EXCISED, workers: int = 1) -> AllNodeFib:
    """Full pipeline: fill the FIB, remove loops, then prune dead ends."""
    fib = fill_fib(topology, classification=classification, workers=workers)
    return _apply(fib, _lfid_column, workers)
