"""Single entry point dispatching to every sparsification algorithm."""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import _kernels as kern
from .bk import bk_sample, shrink_pipeline
from .graph import EdgeStream
from .params import RefineParams
from .refinement import refinement_sample
from .sparsifier import Sparsifier
from .streaming import multipass_sparsify, onepass_sparsify
from .twopass import TwoPassParams, twopass_run

__all__ = ["ALGORITHMS", "RunResult", "run_algorithm"]

ALGORITHMS = ("refsample", "multipass", "onepass", "twopass", "bk")


@dataclass
class RunResult:
    algorithm: str
    sparsifier: Sparsifier
    params: RefineParams
    elapsed_ms: float
    coin_flips: int = 0
    uf_ops: int = 0


def run_algorithm(algo: str, stream: EdgeStream, *, eps: float = 0.5, d: float = 1.0,
                  rho_scale: float = 1.0, K: int | None = None, L: int | None = None,
                  seed: int = 0, delta: float | None = None,
                  shrink: bool = False) -> RunResult:
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")
    if delta is not None and algo != "twopass":
        raise ValueError("delta only applies to twopass")
    params = RefineParams.for_stream(stream, eps=eps, d=d, rho_scale=rho_scale, K=K, L=L,
                                     seed=seed)
    flips = ops = 0
    t0 = time.perf_counter()
    if algo == "refsample":
        sample, _ = refinement_sample(stream, params)
    elif algo == "multipass":
        sample, ladder = multipass_sparsify(stream, params, return_ladder=True)
        flips = ladder.counters[kern.CNT_FLIPS]
        ops = ladder.counters[kern.CNT_UF_OPS]
    elif algo == "onepass":
        sample, state = onepass_sparsify(stream, params)
        flips, ops = state.coin_flips, state.uf_ops
    elif algo == "twopass":
        tp = TwoPassParams.for_stream(stream, delta=0.5 if delta is None else delta, eps=eps,
                                      d=d, rho_scale=rho_scale, seed=seed, K=K, L=L)
        res = twopass_run(stream, stream, tp, shrink=True)
        sample, flips, ops = res.sparsifier, res.coin_flips, res.uf_ops
    else:
        sample = bk_sample(stream, eps=eps, d=d, rho_scale=rho_scale, seed=seed)
    if shrink and algo != "twopass":
        sample = shrink_pipeline(sample, eps, d, seed=seed, rho_scale=rho_scale)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return RunResult(algo, sample, params, elapsed, int(flips), int(ops))
