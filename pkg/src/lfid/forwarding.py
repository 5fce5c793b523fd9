"""Inport-dependent forwarding: loop-freedom oracle, greedy forwarding and
failure-aware recovery checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .fib import AllNodeFib, NexthopEntry
from .shortest_paths import SimplePath, _reverse, lexmin_shortest_path
from .topology import Topology, link_key

SOURCE = "source"


@dataclass(frozen=True)
class FailureSet:
    """Failed links (unordered pairs) and failed nodes.

    Failures are bidirectional: a failed link blocks both arc directions
    and a failed node blocks every link touching it.
    """

    failed_links: frozenset = frozenset()
    failed_nodes: frozenset = frozenset()

    @classmethod
    def of(cls, links: Iterable[tuple[int, int]] = (), nodes: Iterable[int] = ()) -> "FailureSet":
        return cls(frozenset(link_key(a, b) for a, b in links), frozenset(nodes))

    def with_link(self, a: int, b: int) -> "FailureSet":
        return FailureSet(self.failed_links | {link_key(a, b)}, self.failed_nodes)

    def arc_ok(self, u: int, v: int) -> bool:
        return (
            u not in self.failed_nodes
            and v not in self.failed_nodes
            and link_key(u, v) not in self.failed_links
        )

    def __bool__(self) -> bool:
        return bool(self.failed_links or self.failed_nodes)


NO_FAILURES = FailureSet()


@dataclass
class ForwardingState:
    current: int
    destination: int
    inport: Optional[int] = None
    visited: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.visited:
            self.visited = [self.current]

    def advance(self, nexthop: int) -> "ForwardingState":
        return ForwardingState(nexthop, self.destination, self.current, self.visited + [nexthop])


def viable_nexthops(
    fib: AllNodeFib, state: ForwardingState, failures: FailureSet = NO_FAILURES
) -> list[NexthopEntry]:
    """Entries usable at ``state.current``: never back out the inport, never
    over a failed link or into a failed node. Cost order is kept."""
    x = state.current
    return [
        e
        for e in fib.entries(x, state.destination)
        if e.neighbor != state.inport and failures.arc_ok(x, e.neighbor)
    ]


@dataclass(frozen=True)
class WalkVerdict:
    destination: int
    walk: Optional[tuple[int, ...]] = None

    @property
    def loop_free(self) -> bool:
        return self.walk is None


def _returning_states(fib: AllNodeFib, dest: int, target: int) -> set[tuple[int, int]]:
    """Arc-states ``(u, v)`` (at ``v``, arrived from ``u``) from which some
    inport-respecting continuation arrives at ``target``."""
    into: dict[int, list[int]] = {}
    for u, v in fib.arcs(dest):
        into.setdefault(v, []).append(u)
    good = {(u, target) for u in into.get(target, ())}
    queue = deque(good)
    while queue:
        u, v = queue.popleft()
        # (p, u) continues to (u, v) unless v == p
        for p in into.get(u, ()):
            if p != v and (p, u) not in good:
                good.add((p, u))
                queue.append((p, u))
    return good


def enumerate_all_walks(fib: AllNodeFib, destination: int) -> WalkVerdict:
    """Explore every inport-respecting walk toward ``destination``.

    Any walk that revisits a node contains a closed sub-walk starting and
    ending at one node, which is itself a walk from that node. So for each
    start ``s`` it is enough to search simple walks that can still come back
    to ``s``; arc-states that can never return to ``s`` are pruned. Walks
    are simple until the revisit, so their length is bounded by ``n``.
    Returns the first revisiting walk found, or a loop-free verdict.
    """
    for s in range(fib.n):
        if s == destination or not fib.entries(s, destination):
            continue
        good = _returning_states(fib, destination, s)
        if not good:
            continue
        walk = [s]
        on_walk = {s}

        def dfs(prev: Optional[int], cur: int):
            for e in fib.entries(cur, destination):
                nxt = e.neighbor
                if nxt == prev:
                    continue
                if nxt in on_walk:
                    return walk + [nxt]
                if (cur, nxt) not in good:
                    continue
                walk.append(nxt)
                on_walk.add(nxt)
                found = dfs(cur, nxt)
                if found:
                    return found
                walk.pop()
                on_walk.discard(nxt)
            return None

        found = dfs(None, s)
        if found:
            return WalkVerdict(destination, tuple(found))
    return WalkVerdict(destination)


def verify_fib(fib: AllNodeFib) -> list[WalkVerdict]:
    return [enumerate_all_walks(fib, d) for d in range(fib.n)]


def filtered_arcs(
    fib: AllNodeFib, topology: Topology, dst: int, failures: FailureSet
) -> dict[int, list[tuple[int, int]]]:
    """Weighted arc map of ``dst``'s FIB digraph minus failed elements."""
    out: dict[int, list[tuple[int, int]]] = {}
    for x, lst in enumerate(fib.table[dst]):
        if x in failures.failed_nodes:
            continue
        arcs = [(e.neighbor, topology.weight(x, e.neighbor)) for e in lst
                if failures.arc_ok(x, e.neighbor)]
        if arcs:
            out[x] = arcs
    return out


def _resolve_vantage(src: int, vantage: Union[int, str]) -> int:
    return src if vantage == SOURCE else int(vantage)


def recovery_exists(
    fib: AllNodeFib,
    topology: Topology,
    src: int,
    dst: int,
    failures: FailureSet = NO_FAILURES,
    vantage: Union[int, str] = SOURCE,
) -> bool:
    """Whether ``dst`` is reachable from the vantage node in the filtered FIB digraph.

    ``vantage`` is a node id (typically the router adjacent to the failure)
    or ``"source"`` for backtracking all the way to ``src``.
    """
    start = _resolve_vantage(src, vantage)
    if start == dst:
        return True
    arcs = filtered_arcs(fib, topology, dst, failures)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v, _ in arcs.get(u, ()):
            if v == dst:
                return True
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return False


def cheapest_recovery_path(
    fib: AllNodeFib,
    topology: Topology,
    dst: int,
    start: int,
    failures: FailureSet = NO_FAILURES,
) -> Optional[SimplePath]:
    """Minimum-cost path ``start -> dst`` over surviving FIB arcs (link weights)."""
    arcs = filtered_arcs(fib, topology, dst, failures)
    return lexmin_shortest_path(arcs, _reverse(arcs), start, dst, set(), set())


def greedy_forward(
    fib: AllNodeFib,
    src: int,
    dst: int,
    failures: FailureSet = NO_FAILURES,
    inport: Optional[int] = None,
) -> Optional[list[int]]:
    """Forward by always taking the cheapest viable entry.

    Returns the node sequence on arrival, or ``None`` when the packet gets
    stuck or revisits a node.
    """
    state = ForwardingState(src, dst, inport)
    seen = {src}
    while state.current != dst:
        options = viable_nexthops(fib, state, failures)
        if not options:
            return None
        nxt = options[0].neighbor
        if nxt in seen:
            return None
        seen.add(nxt)
        state = state.advance(nxt)
    return state.visited
