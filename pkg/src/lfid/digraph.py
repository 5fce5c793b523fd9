"""Per-destination directed graph induced by FIB entries."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator


class DestinationDigraph:
    """Arc set ``x -> n`` for every FIB entry of ``x`` toward ``destination``.

    Successor and predecessor sets are both kept so reachability can be
    searched from either end.
    """

    __slots__ = ("destination", "succ", "pred")

    def __init__(self, destination: int, arcs: Iterable[tuple[int, int]] = ()):
        self.destination = destination
        self.succ: dict[int, set[int]] = defaultdict(set)
        self.pred: dict[int, set[int]] = defaultdict(set)
        for u, v in arcs:
            self.add(u, v)

    @classmethod
    def from_fib(cls, fib, destination: int) -> "DestinationDigraph":
        return cls(
            destination,
            (
                (x, e.neighbor)
                for x in range(fib.n)
                for e in fib.entries(x, destination)
            ),
        )

    def add(self, u: int, v: int) -> None:
        self.succ[u].add(v)
        self.pred[v].add(u)

    def discard(self, u: int, v: int) -> None:
        self.succ[u].discard(v)
        self.pred[v].discard(u)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.succ.get(u, ())

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in sorted(self.succ):
            for v in sorted(self.succ[u]):
                yield u, v

    def __len__(self) -> int:
        return sum(len(s) for s in self.succ.values())

    def __repr__(self) -> str:
        return f"DestinationDigraph(destination={self.destination}, arcs={len(self)})"
