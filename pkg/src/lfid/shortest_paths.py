"""Shortest-path kernels shared by every routing algorithm.

Costs are integer milli-units. An unreachable node is simply absent from a
cost mapping; there is no infinity sentinel to do arithmetic on.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

from .topology import Topology

# node -> [(successor, weight), ...]
ArcMap = Mapping[int, Sequence[tuple[int, int]]]


@dataclass(frozen=True)
class CostTable:
    source: int
    cost: dict[int, int]

    def __getitem__(self, node: int) -> int:
        return self.cost[node]

    def get(self, node: int, default=None):
        return self.cost.get(node, default)

    def __contains__(self, node: int) -> bool:
        return node in self.cost


@dataclass(frozen=True)
class SimplePath:
    nodes: tuple[int, ...]
    cost: int

    def __len__(self) -> int:
        return len(self.nodes)

    def links(self) -> list[tuple[int, int]]:
        return list(zip(self.nodes, self.nodes[1:]))


def sssp(adjacency, source: int, excluded: Optional[int] = None) -> dict[int, int]:
    """Dijkstra over ``adjacency[u] = [(v, w), ...]``, skipping ``excluded``."""
    dist = {source: 0}
    heap = [(0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adjacency[u]:
            if v == excluded or v in done:
                continue
            nd = d + w
            old = dist.get(v)
            if old is None or nd < old:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def dijkstra(topology: Topology, source: int) -> CostTable:
    return CostTable(source, sssp(topology.adjacency, source))


def all_pairs_costs(topology: Topology) -> list[dict[int, int]]:
    return [sssp(topology.adjacency, s) for s in range(topology.n)]


def neighbor_costs_excluding(topology: Topology, x: int) -> dict[int, CostTable]:
    """Shortest-path costs of each neighbour of ``x`` in the graph without ``x``."""
    adj = topology.adjacency
    return {n: CostTable(n, sssp(adj, n, excluded=x)) for n, _ in adj[x]}


def shortest_path_tree(topology: Topology, source: int) -> tuple[dict[int, int], dict[int, int]]:
    """Costs and predecessors from ``source``.

    Among equal-cost predecessors the lowest node id wins, which makes the
    resulting paths canonical.
    """
    adj = topology.adjacency
    dist = {source: 0}
    pred: dict[int, int] = {}
    heap = [(0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj[u]:
            if v in done:
                continue
            nd = d + w
            old = dist.get(v)
            if old is None or nd < old:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == old and u < pred[v]:
                pred[v] = u
    return dist, pred


def canonical_shortest_path(topology: Topology, src: int, dst: int) -> Optional[SimplePath]:
    dist, pred = shortest_path_tree(topology, src)
    if dst not in dist:
        return None
    nodes = [dst]
    while nodes[-1] != src:
        nodes.append(pred[nodes[-1]])
    return SimplePath(tuple(reversed(nodes)), dist[dst])


def _as_arcmap(graph: Union[Topology, ArcMap]) -> ArcMap:
    if isinstance(graph, Topology):
        return {u: graph.adjacency[u] for u in range(graph.n)}
    return graph


def _reverse(arcs: ArcMap) -> dict[int, list[tuple[int, int]]]:
    rev: dict[int, list[tuple[int, int]]] = {}
    for u, outs in arcs.items():
        for v, w in outs:
            rev.setdefault(v, []).append((u, w))
    return rev


def lexmin_shortest_path(
    arcs: ArcMap,
    rev: ArcMap,
    src: int,
    dst: int,
    banned_nodes: set[int],
    banned_arcs: set[tuple[int, int]],
) -> Optional[SimplePath]:
    """Cheapest src->dst path, ties broken by lexicographic node sequence."""
    # distances *to* dst on the restricted graph
    to_dst = {dst: 0}
    heap = [(0, dst)]
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for u, w in rev.get(v, ()):
            if u in done or u in banned_nodes or (u, v) in banned_arcs:
                continue
            nd = d + w
            if nd < to_dst.get(u, nd + 1):
                to_dst[u] = nd
                heapq.heappush(heap, (nd, u))
    if src not in to_dst:
        return None

    nodes = [src]
    u = src
    while u != dst:
        best = None
        for v, w in arcs.get(u, ()):
            if v in banned_nodes or (u, v) in banned_arcs:
                continue
            rest = to_dst.get(v)
            if rest is not None and w + rest == to_dst[u] and (best is None or v < best):
                best = v
        nodes.append(best)
        u = best
    return SimplePath(tuple(nodes), to_dst[src])


def path_cost(arcs: ArcMap, nodes: Sequence[int]) -> int:
    total = 0
    for u, v in zip(nodes, nodes[1:]):
        total += dict(arcs[u])[v]
    return total


def yen_k_shortest(
    graph: Union[Topology, ArcMap], src: int, dst: int, k: int
) -> list[SimplePath]:
    """The ``k`` cheapest simple paths from ``src`` to ``dst``.

    ``graph`` is a :class:`Topology` (undirected) or an arc map
    ``{u: [(v, weight), ...]}`` (directed). Paths come back ordered by
    ``(cost, node sequence)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    arcs = _as_arcmap(graph)
    rev = _reverse(arcs)
    if src == dst:
        return [SimplePath((src,), 0)]
    first = lexmin_shortest_path(arcs, rev, src, dst, set(), set())
    if first is None:
        return []

    accepted = [first]
    seen = {first.nodes}
    candidates: list[tuple[int, tuple[int, ...]]] = []
    while len(accepted) < k:
        last = accepted[-1].nodes
        for i in range(len(last) - 1):
            spur = last[i]
            root = last[: i + 1]
            banned_arcs = {
                (p.nodes[i], p.nodes[i + 1])
                for p in accepted
                if len(p.nodes) > i + 1 and p.nodes[: i + 1] == root
            }
            banned_nodes = set(root[:-1])
            spur_path = lexmin_shortest_path(arcs, rev, spur, dst, banned_nodes, banned_arcs)
            if spur_path is None:
                continue
            nodes = root[:-1] + spur_path.nodes
            if nodes in seen:
                continue
            seen.add(nodes)
            heapq.heappush(candidates, (path_cost(arcs, root) + spur_path.cost, nodes))
        if not candidates:
            break
        cost, nodes = heapq.heappop(candidates)
        accepted.append(SimplePath(nodes, cost))
    return accepted


def is_reachable(digraph, source: int, target: int, bidirectional: bool = True) -> bool:
    """Whether a directed path ``source -> target`` exists.

    ``digraph`` needs ``succ`` and ``pred`` mappings of node -> iterable.
    The bidirectional search always expands the smaller frontier; pass
    ``bidirectional=False`` for a plain forward BFS.
    """
    if source == target:
        return True
    succ, pred = digraph.succ, digraph.pred
    if not bidirectional:
        seen = {source}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in succ.get(u, ()):
                if v == target:
                    return True
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return False

    fwd_seen, bwd_seen = {source}, {target}
    fwd, bwd = [source], [target]
    while fwd and bwd:
        if len(fwd) <= len(bwd):
            nxt = []
            for u in fwd:
                for v in succ.get(u, ()):
                    if v in bwd_seen:
                        return True
                    if v not in fwd_seen:
                        fwd_seen.add(v)
                        nxt.append(v)
            fwd = nxt
        else:
            nxt = []
            for v in bwd:
                for u in pred.get(v, ()):
                    if u in fwd_seen:
                        return True
                    if u not in bwd_seen:
                        bwd_seen.add(u)
                        nxt.append(u)
            bwd = nxt
    return False


def weighted_arcs(arcs: Iterable[tuple[int, int]], topology: Topology) -> dict[int, list[tuple[int, int]]]:
    """Attach link weights to a directed arc list."""
    out: dict[int, list[tuple[int, int]]] = {}
    for u, v in arcs:
        out.setdefault(u, []).append((v, topology.weight(u, v)))
    return out
