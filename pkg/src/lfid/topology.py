"""Topology model, edge-list ingestion and random test graphs.

Link weights are stored as integer milli-units so that the equal-cost
comparisons made by ECMP and DWE are exact.
"""

from __future__ import annotations

import hashlib
import io
import logging
import random
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from importlib import resources
from typing import Iterable, Optional, TextIO, Union

logger = logging.getLogger(__name__)

MILLI = 1000

EXPLICIT = "explicit"
HOP_COUNT = "hop_count"
WEIGHT_MODES = (EXPLICIT, HOP_COUNT)


class TopologyError(ValueError):
    """Raised for malformed or invalid topology input."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class Link:
    a: int
    b: int
    weight: int

    def other(self, node: int) -> int:
        return self.b if node == self.a else self.a

    @property
    def key(self) -> tuple[int, int]:
        return link_key(self.a, self.b)


def link_key(a: int, b: int) -> tuple[int, int]:
    """Canonical unordered pair for a link."""
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Topology:
    """Undirected weighted graph with dense integer node ids.

    Build instances with :meth:`from_links`, :func:`load_topology` or
    :func:`random_connected_graph`; the constructor expects already
    validated fields.
    """

    n: int
    links: tuple[Link, ...]
    labels: tuple[str, ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)
    _weights: dict = field(repr=False, compare=False)
    component: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_links(
        cls,
        n: int,
        links: Iterable[tuple[int, int, int]],
        labels: Optional[Iterable[str]] = None,
    ) -> "Topology":
        if n < 1:
            raise TopologyError("topology needs at least one node")
        weights: dict[tuple[int, int], int] = {}
        for a, b, w in links:
            a, b, w = int(a), int(b), int(w)
            if not (0 <= a < n and 0 <= b < n):
                raise TopologyError(f"link ({a}, {b}) references unknown node")
            if a == b:
                raise TopologyError(f"self-loop at node {a}")
            if w <= 0:
                raise TopologyError(f"non-positive weight {w} on link ({a}, {b})")
            key = link_key(a, b)
            if key in weights:
                raise TopologyError(f"duplicate link {key}")
            weights[key] = w
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(labels)
        if len(labels) != n:
            raise TopologyError("label count does not match node count")
        if len(set(labels)) != n:
            raise TopologyError("node labels must be unique")

        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (a, b), w in weights.items():
            adj[a].append((b, w))
            adj[b].append((a, w))
        adjacency = tuple(tuple(sorted(nbrs)) for nbrs in adj)
        link_objs = tuple(Link(a, b, w) for (a, b), w in sorted(weights.items()))
        component = _components(n, adjacency)
        topo = cls(n, link_objs, labels, adjacency, weights, component)
        if n > 1 and max(component) > 0:
            logger.warning(
                "topology is disconnected (%d components); pairs are restricted "
                "to within a component",
                max(component) + 1,
            )
        return topo

    @property
    def m(self) -> int:
        return len(self.links)

    @property
    def mean_degree(self) -> float:
        return 2 * self.m / self.n

    @property
    def n_components(self) -> int:
        return max(self.component) + 1

    def neighbors(self, node: int) -> list[int]:
        return [v for v, _ in self.adjacency[node]]

    def weight(self, a: int, b: int) -> int:
        return self._weights[link_key(a, b)]

    def has_link(self, a: int, b: int) -> bool:
        return link_key(a, b) in self._weights

    def connected(self, a: int, b: int) -> bool:
        return self.component[a] == self.component[b]

    def node_id(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown node label {label!r}") from None

    def pairs(self) -> list[tuple[int, int]]:
        """Ordered (src, dst) pairs, src != dst, within one component."""
        return [
            (s, d)
            for s in range(self.n)
            for d in range(self.n)
            if s != d and self.component[s] == self.component[d]
        ]

    def scaled(self, factor: int) -> "Topology":
        return Topology.from_links(
            self.n, ((l.a, l.b, l.weight * factor) for l in self.links), self.labels
        )

    def to_edge_list(self) -> str:
        out = io.StringIO()
        for link in self.links:
            out.write(
                f"{self.labels[link.a]} {self.labels[link.b]} {_format_weight(link.weight)}\n"
            )
        return out.getvalue()

    def digest(self) -> str:
        """Short content hash used in experiment output headers."""
        return hashlib.sha256(self.to_edge_list().encode()).hexdigest()[:16]


def _components(n, adjacency) -> tuple[int, ...]:
    comp = [-1] * n
    label = 0
    for start in range(n):
        if comp[start] >= 0:
            continue
        comp[start] = label
        stack = [start]
        while stack:
            u = stack.pop()
            for v, _ in adjacency[u]:
                if comp[v] < 0:
                    comp[v] = label
                    stack.append(v)
        label += 1
    return tuple(comp)


def _format_weight(milli: int) -> str:
    text = str(Decimal(milli) / MILLI)
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def _parse_weight(token: str, lineno: int) -> int:
    try:
        value = Decimal(token)
    except InvalidOperation:
        raise TopologyError(f"weight {token!r} is not a number", lineno) from None
    if not value.is_finite():
        raise TopologyError(f"weight {token!r} is not finite", lineno)
    exponent = value.as_tuple().exponent
    if isinstance(exponent, int) and exponent < -3:
        raise TopologyError(f"weight {token!r} has more than 3 fractional digits", lineno)
    if value <= 0:
        raise TopologyError(f"non-positive weight {token!r}", lineno)
    return int(value * MILLI)


def load_topology(
    text: Union[str, TextIO], weight_mode: str = EXPLICIT
) -> Topology:
    """Parse the whitespace-separated ``<a> <b> [weight]`` edge-list format.

    Node tokens are mapped to dense ids in first-appearance order. ``#``
    starts a comment. In ``hop_count`` mode every weight becomes 1.
    """
    if weight_mode not in WEIGHT_MODES:
        raise ValueError(f"weight_mode must be one of {WEIGHT_MODES}, got {weight_mode!r}")
    lines = text.splitlines() if isinstance(text, str) else text.read().splitlines()

    ids: dict[str, int] = {}
    seen: dict[tuple[int, int], int] = {}
    links = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise TopologyError(
                f"expected '<node_a> <node_b> [weight]', got {raw.strip()!r}", lineno
            )
        a_name, b_name = tokens[0], tokens[1]
        weight = _parse_weight(tokens[2], lineno) if len(tokens) == 3 else MILLI
        if a_name == b_name:
            raise TopologyError(f"self-loop on node {a_name!r}", lineno)
        a = ids.setdefault(a_name, len(ids))
        b = ids.setdefault(b_name, len(ids))
        key = link_key(a, b)
        if key in seen:
            raise TopologyError(
                f"duplicate link {a_name}-{b_name} (first at line {seen[key]})", lineno
            )
        seen[key] = lineno
        if weight_mode == HOP_COUNT:
            weight = MILLI
        links.append((a, b, weight))

    if not ids:
        raise TopologyError("no links found")
    labels = sorted(ids, key=ids.__getitem__)
    return Topology.from_links(len(labels), links, labels)


def read_topology(path, weight_mode: str = EXPLICIT) -> Topology:
    with open(path, encoding="utf-8") as fh:
        return load_topology(fh, weight_mode)


def bundled_topology(name: str, weight_mode: str = EXPLICIT) -> Topology:
    """Load a topology shipped with the package (currently ``abilene``)."""
    resource = resources.files("lfid") / "data" / f"{name}.txt"
    if not resource.is_file():
        raise FileNotFoundError(f"no bundled topology named {name!r}")
    return load_topology(resource.read_text(encoding="utf-8"), weight_mode)


def random_connected_graph(
    n: int,
    extra_edges: int,
    weight_range: tuple[float, float] = (1, 1),
    seed: int = 0,
) -> Topology:
    """Uniform random spanning tree plus ``extra_edges`` distinct random links.

    The spanning tree comes from a random walk (Aldous-Broder), which samples
    uniformly among spanning trees of the complete graph. Weights are drawn
    uniformly from the half-unit grid inside ``weight_range``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    max_extra = n * (n - 1) // 2 - (n - 1)
    if not 0 <= extra_edges <= max_extra:
        raise ValueError(f"extra_edges must be in [0, {max_extra}] for n={n}")
    lo, hi = weight_range
    if lo <= 0 or hi < lo:
        raise ValueError("weight_range must satisfy 0 < lo <= hi")

    rng = random.Random(seed)
    lo_m, hi_m = int(Decimal(str(lo)) * MILLI), int(Decimal(str(hi)) * MILLI)
    step = MILLI // 2
    grid = list(range(lo_m, hi_m + 1, step)) if hi_m > lo_m else [lo_m]

    edges: set[tuple[int, int]] = set()
    visited = {0}
    current = 0
    while len(visited) < n:
        nxt = rng.randrange(n - 1)
        if nxt >= current:
            nxt += 1
        if nxt not in visited:
            visited.add(nxt)
            edges.add(link_key(current, nxt))
        current = nxt

    candidates = [
        (a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in edges
    ]
    edges.update(rng.sample(candidates, extra_edges))
    links = [(a, b, rng.choice(grid)) for a, b in sorted(edges)]
    return Topology.from_links(n, links)
