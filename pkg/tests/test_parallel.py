import time

import pytest

import lfid.parallel as parallel
from lfid.baselines import compute_dwe
from lfid.experiments import ExperimentConfig, multi_failure_experiment
from lfid.pipeline import compute_lfid
from lfid.topology import random_connected_graph


def _square(offset, x, scale=1):
    return (x + offset) ** 2 * scale


@pytest.fixture
def four_cpus(monkeypatch):
    monkeypatch.setattr(parallel, "available_cpus", lambda: 4)


def test_effective_workers_capped():
    assert parallel.effective_workers(10 ** 6) == parallel.available_cpus()
    with pytest.raises(ValueError):
        parallel.effective_workers(0)


def test_pool_keeps_order(four_cpus):
    got = parallel.pmap(_square, range(37), 4, 1, scale=2)
    assert got == [(x + 1) ** 2 * 2 for x in range(37)]


def test_pool_results_match_serial(four_cpus):
    t = random_connected_graph(30, 30, (1, 10), seed=11)
    serial_lfid = compute_lfid(t, workers=1)
    assert compute_lfid(t, workers=4) == serial_lfid
    assert compute_dwe(t, workers=3) == compute_dwe(t, workers=1)
    cfg = dict(k=3, runs=2, seed=4)
    a = multi_failure_experiment(t, serial_lfid, ExperimentConfig(**cfg, workers=1), "lfid")
    b = multi_failure_experiment(t, serial_lfid, ExperimentConfig(**cfg, workers=4), "lfid")
    assert a == b


@pytest.mark.slow
@pytest.mark.skipif(parallel.available_cpus() < 2, reason="needs at least 2 CPUs")
def test_parallel_speedup():
    t = random_connected_graph(80, 80, (1, 10), seed=2)
    t0 = time.perf_counter()
    compute_lfid(t, workers=1)
    serial = time.perf_counter() - t0
    t0 = time.perf_counter()
    compute_lfid(t, workers=2)
    assert time.perf_counter() - t0 < serial
