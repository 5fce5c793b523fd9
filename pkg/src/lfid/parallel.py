"""Process fan-out helpers.

Results always come back in input order, so output never depends on the
worker count.
"""

from __future__ import annotations

import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor

_state: tuple = ()


def available_cpus() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


def effective_workers(requested: int) -> int:
    """Requested worker count, capped at the CPUs this process may use."""
    if requested < 1:
        raise ValueError("worker count must be >= 1")
    return min(requested, available_cpus())


def _init(func, shared, kwargs):
    global _state
    _state = (func, shared, kwargs)


def _run_chunk(chunk):
    func, shared, kwargs = _state
    return [func(*shared, item, **kwargs) for item in chunk]


def pmap(func, items, workers: int, *shared, **kwargs) -> list:
    """``[func(*shared, item, **kwargs) for item in items]``, possibly in parallel."""
    items = list(items)
    w = effective_workers(workers)
    if w == 1 or len(items) < 2:
        return [func(*shared, item, **kwargs) for item in items]

    n_chunks = min(len(items), w * 4)
    chunks = [items[i::n_chunks] for i in range(n_chunks)]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(w, mp_context=ctx, initializer=_init,
                             initargs=(func, shared, kwargs)) as pool:
        parts = list(pool.map(_run_chunk, chunks))
    out = [None] * len(items)
    for i, part in enumerate(parts):
        out[i::n_chunks] = part
    return out


def map_nodes(func, topology, items, workers: int, **kwargs) -> list:
    return pmap(func, items, workers, topology, **kwargs)
