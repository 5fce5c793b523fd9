"""Evaluation drivers: K-shortest paths, single and repeated failures, runtime.

Every driver takes a FIB (or ``None`` for OPT, the undirected topology
itself) and returns a flat list of :class:`TrialRecord`, sorted canonically
so output is independent of the worker count.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .algorithms import ALGORITHMS, OPT, compute_fib
from .fib import AllNodeFib
from .forwarding import NO_FAILURES, FailureSet, filtered_arcs
from .parallel import effective_workers, pmap
from .shortest_paths import (
    SimplePath,
    _reverse,
    canonical_shortest_path,
    lexmin_shortest_path,
    yen_k_shortest,
)
from .topology import Topology

RNG_ID = "numpy-PCG64/SeedSequence[seed,run,src,dst]"
MIN_AVAILABILITY = 0.05

LINK, NODE = "link", "node"
ADJACENT, BACKTRACKING = "adjacent", "backtracking"


@dataclass(frozen=True)
class TrialRecord:
    algorithm: str
    src: int
    dst: int
    scenario: str
    k_index: int
    recovered: bool
    path_cost: Optional[int] = None
    optimal_cost: Optional[int] = None
    run: int = 0
    path: tuple[int, ...] = ()
    failure: tuple = ()
    walk_cost: Optional[int] = None
    walk_optimal_cost: Optional[int] = None

    @property
    def stretch(self) -> Optional[float]:
        """Recovery path cost over the optimum from the same router."""
        if self.path_cost is None or self.optimal_cost is None:
            return None
        return self.path_cost / self.optimal_cost

    @property
    def walk_stretch(self) -> Optional[float]:
        """Whole traversed walk from the source over the source's optimum."""
        if self.walk_cost is None or self.walk_optimal_cost is None:
            return None
        return self.walk_cost / self.walk_optimal_cost

    def sort_key(self):
        return (self.algorithm, self.scenario, self.run, self.src, self.dst,
                self.k_index, self.failure)


@dataclass
class ExperimentConfig:
    k: int = 10
    runs: int = 100
    seed: int = 0
    algorithms: Sequence[str] = field(default_factory=lambda: list(ALGORITHMS))
    workers: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


def _arc_map(topology: Topology, fib: Optional[AllNodeFib], dst: int,
             failures: FailureSet = NO_FAILURES):
    if fib is not None:
        return filtered_arcs(fib, topology, dst, failures)
    return {
        u: [(v, w) for v, w in topology.adjacency[u] if failures.arc_ok(u, v)]
        for u in range(topology.n)
        if u not in failures.failed_nodes
    }


def _cheapest(topology, fib, dst, start, failures) -> Optional[SimplePath]:
    arcs = _arc_map(topology, fib, dst, failures)
    return lexmin_shortest_path(arcs, _reverse(arcs), start, dst, set(), set())


def _optimal(topology, src, dst, failures) -> Optional[SimplePath]:
    return _cheapest(topology, None, dst, src, failures)


def _sorted(chunks: Iterable[list[TrialRecord]]) -> list[TrialRecord]:
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=TrialRecord.sort_key)
    return records


# --- K shortest paths -------------------------------------------------------

def _k_paths_for_dst(topology, fib, k, algorithm, dst):
    arcs = _arc_map(topology, fib, dst)
    out = []
    for src in range(topology.n):
        if src == dst or not topology.connected(src, dst):
            continue
        opt = yen_k_shortest(topology, src, dst, k)
        got = yen_k_shortest(arcs, src, dst, k) if fib is not None else opt
        for i in range(k):
            p = got[i] if i < len(got) else None
            o = opt[i] if i < len(opt) else None
            out.append(TrialRecord(
                algorithm, src, dst, "k-paths", i + 1, p is not None,
                p.cost if p else None, o.cost if o else None,
                path=p.nodes if p else (),
            ))
    return out


def k_path_stats(topology: Topology, fib: Optional[AllNodeFib], config: ExperimentConfig,
                 algorithm: str = "") -> list[TrialRecord]:
    """For every ordered pair, the K cheapest FIB paths against the K cheapest
    undirected paths. Pass ``fib=None`` for OPT."""
    algorithm = algorithm or (OPT if fib is None else "fib")
    chunks = pmap(_k_paths_for_dst, range(topology.n), config.workers,
                  topology, fib, config.k, algorithm)
    return _sorted(chunks)


def summarize_k_paths(records: Iterable[TrialRecord]) -> list[dict]:
    """Per (algorithm, k): share of pairs with at least k paths and mean stretch.

    Stretch is withheld where fewer than 5% of pairs have a k-th path.
    """
    cells = defaultdict(lambda: [0, 0, []])
    for r in records:
        cell = cells[(r.algorithm, r.k_index)]
        cell[0] += 1
        if r.recovered:
            cell[1] += 1
            cell[2].append(r.stretch)
    out = []
    for (alg, k), (total, have, stretches) in sorted(cells.items()):
        share = have / total if total else 0.0
        out.append({
            "algorithm": alg, "k": k, "pairs": total, "with_k_paths": have,
            "availability": share,
            "mean_stretch": float(np.mean(stretches)) if share >= MIN_AVAILABILITY and stretches else None,
        })
    return out


# --- single failures ----------------------------------------------------------

def _single_for_src(topology, fib, mode, vantage, algorithm, src):
    out = []
    scenario = f"{mode}-{vantage}"
    for dst in range(topology.n):
        if dst == src or not topology.connected(src, dst):
            continue
        sp = canonical_shortest_path(topology, src, dst)
        nodes = sp.nodes
        if mode == LINK:
            problems = [(i, FailureSet.of(links=[(nodes[i], nodes[i + 1])]))
                        for i in range(len(nodes) - 1)]
        else:
            problems = [(i - 1, FailureSet.of(nodes=[nodes[i]]))
                        for i in range(1, len(nodes) - 1)]
        for i, failures in problems:
            start = nodes[i] if vantage == ADJACENT else src
            prefix = sum(topology.weight(a, b) for a, b in zip(nodes[:i], nodes[1:i + 1])) \
                if vantage == ADJACENT else 0
            tag = tuple(sorted(failures.failed_links)) or tuple(sorted(failures.failed_nodes))
            best = _optimal(topology, src, dst, failures)
            local = best if start == src else _optimal(topology, start, dst, failures)
            path = _cheapest(topology, fib, dst, start, failures)
            out.append(TrialRecord(
                algorithm, src, dst, scenario, 1, path is not None,
                path.cost if path else None,
                local.cost if local else None,
                path=path.nodes if path else (), failure=tag,
                walk_cost=prefix + path.cost if path else None,
                walk_optimal_cost=best.cost if best else None,
            ))
    return out


def single_failure_experiment(topology: Topology, fib: Optional[AllNodeFib], mode: str = LINK,
                              vantage: str = ADJACENT, algorithm: str = "",
                              workers: int = 1) -> list[TrialRecord]:
    """Fail each link (or intermediate node) of every pair's canonical
    shortest path and check for a surviving FIB path from the adjacent
    router or from the source. ``fib=None`` gives OPT."""
    if mode not in (LINK, NODE):
        raise ValueError(f"mode must be {LINK!r} or {NODE!r}")
    if vantage not in (ADJACENT, BACKTRACKING):
        raise ValueError(f"vantage must be {ADJACENT!r} or {BACKTRACKING!r}")
    algorithm = algorithm or (OPT if fib is None else "fib")
    chunks = pmap(_single_for_src, range(topology.n), workers,
                  topology, fib, mode, vantage, algorithm)
    return _sorted(chunks)


def summarize_single(records: Iterable[TrialRecord]) -> list[dict]:
    """Recovered failures relative to those OPT can recover (OPT = 100%).

    A failure is recoverable by OPT when the undirected topology still joins
    src and dst, which is exactly when ``optimal_cost`` is present.
    """
    cells = defaultdict(lambda: [0, 0])
    for r in records:
        cell = cells[(r.algorithm, r.scenario)]
        cell[0] += r.recovered
        cell[1] += r.optimal_cost is not None
    return [
        {"algorithm": alg, "scenario": sc, "recovered": rec, "recoverable": opt,
         "protection": rec / opt if opt else None}
        for (alg, sc), (rec, opt) in sorted(cells.items())
    ]


# --- repeated failures --------------------------------------------------------

def _multi_for_src(topology, fib, k, runs, seed, algorithm, src):
    out = []
    for run in range(runs):
        for dst in range(topology.n):
            if dst == src or not topology.connected(src, dst):
                continue
            out.extend(_failure_chain(topology, fib, k, seed, run, algorithm, src, dst))
    return out


def _failure_chain(topology, fib, k, seed, run, algorithm, src, dst):
    rng = np.random.default_rng([seed, run, src, dst])
    failures = NO_FAILURES
    path = canonical_shortest_path(topology, src, dst).nodes
    prefix_cost = 0
    out = []
    for step in range(1, k + 1):
        candidates = [(a, b) for a, b in zip(path, path[1:]) if failures.arc_ok(a, b)]
        i = int(rng.integers(len(candidates)))
        a, b = candidates[i]
        failures = failures.with_link(a, b)
        pos = path.index(a)
        prefix_cost += sum(topology.weight(u, v) for u, v in zip(path[:pos], path[1:pos + 1]))
        recovery = _cheapest(topology, fib, dst, a, failures)
        best = _optimal(topology, src, dst, failures)
        local = best if a == src else _optimal(topology, a, dst, failures)
        tag = tuple(sorted(failures.failed_links))
        if recovery is None:
            out.append(TrialRecord(algorithm, src, dst, "multi-link", step, False, None,
                                   local.cost if local else None, run=run, failure=tag,
                                   walk_optimal_cost=best.cost if best else None))
            break
        out.append(TrialRecord(algorithm, src, dst, "multi-link", step, True,
                               recovery.cost, local.cost, run=run,
                               path=recovery.nodes, failure=tag,
                               walk_cost=prefix_cost + recovery.cost,
                               walk_optimal_cost=best.cost))
        path = recovery.nodes
    return out


def multi_failure_experiment(topology: Topology, fib: Optional[AllNodeFib],
                             config: ExperimentConfig, algorithm: str = "") -> list[TrialRecord]:
    """Chains of up to K failures, each placed on the path currently in use.

    Each step fails a random link of the current path and reroutes from the
    router just upstream of it along the cheapest surviving FIB path.
    ``stretch`` compares that path with the optimum from the same router
    avoiding every failure so far; ``walk_stretch`` compares the whole walk
    since the source with the source's optimum.

    Run ``r`` of pair ``(s, d)`` draws from a generator seeded with
    ``[seed, r, s, d]``, so every algorithm faces the same draws as long as
    their paths agree. A chain stops at the first failure with no recovery
    path from the router upstream of the failed link.
    """
    algorithm = algorithm or (OPT if fib is None else "fib")
    chunks = pmap(_multi_for_src, range(topology.n), config.workers,
                  topology, fib, config.k, config.runs, config.seed, algorithm)
    return _sorted(chunks)


def summarize_multi(records: Iterable[TrialRecord], n_chains: int) -> list[dict]:
    """Per (algorithm, k): share of chains that survived k failures, mean stretch."""
    cells = defaultdict(list)
    for r in records:
        if r.recovered:
            cells[(r.algorithm, r.k_index)].append((r.stretch, r.walk_stretch))
    return [
        {"algorithm": alg, "k": k, "recovered": len(s), "chains": n_chains,
         "recovery": len(s) / n_chains if n_chains else None,
         "mean_stretch": float(np.mean([a for a, _ in s])),
         "mean_walk_stretch": float(np.mean([b for _, b in s]))}
        for (alg, k), s in sorted(cells.items())
    ]


# --- runtime -------------------------------------------------------------------

def runtime_benchmark(topologies: dict[str, Topology], algorithms: Sequence[str],
                      repetitions: int = 3, workers: int = 1) -> list[dict]:
    """Best-of-``repetitions`` wall clock for a full-network FIB computation,
    serially and with ``workers`` processes."""
    rows = []
    modes = [("serial", 1)]
    if workers > 1:
        modes.append(("parallel", workers))
    for name, topo in topologies.items():
        for alg in algorithms:
            for mode, w in modes:
                best = float("inf")
                for _ in range(repetitions):
                    t0 = time.perf_counter()
                    compute_fib(alg, topo, workers=w)
                    best = min(best, time.perf_counter() - t0)
                rows.append({"topology": name, "n": topo.n, "m": topo.m, "algorithm": alg,
                             "mode": mode, "workers": effective_workers(w), "seconds": best})
    return rows
