"""Algorithm tokens and dispatch."""

from __future__ import annotations

from .baselines import compute_dw, compute_dwe, compute_ecmp, compute_mara_mc, compute_mara_spe
from .pipeline import compute_lfid

ALGORITHMS = {
    "ecmp": compute_ecmp,
    "dw": compute_dw,
    "dwe": compute_dwe,
    "lfid": compute_lfid,
}

# Comparison slots kept so result tables have the expected shape.
UNIMPLEMENTED = {
    "mara-mc": compute_mara_mc,
    "mara-spe": compute_mara_spe,
}

OPT = "opt"


def compute_fib(token: str, topology, workers: int = 1):
    if token in UNIMPLEMENTED:
        return UNIMPLEMENTED[token](topology)
    try:
        func = ALGORITHMS[token]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {token!r}; choose from {sorted(ALGORITHMS)}"
        ) from None
    return func(topology, workers=workers)
