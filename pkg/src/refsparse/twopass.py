"""Two-pass sparsifier: uniform pre-sampling into a one-pass ladder, then
strength-guided resampling into a fresh one-pass run and a final shrink."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from .bk import shrink_pipeline
from .connectivity import CoinOracle, partition_refines
from .graph import EdgeStream
from .params import RefineParams
from .sparsifier import Sparsifier, binomial_from_uniform
from .streaming import OnePassState, onepass_sparsify, weight_cap

__all__ = [
    "TwoPassParams",
    "FrozenLadderColumn",
    "TwoPassResult",
    "pass_one",
    "prefilter",
    "truncated_strength_estimate",
    "twopass_run",
    "twopass_sparsify",
]

# derive() tags separating the stages' randomness
_TAG_SECOND = 2
_TAG_SHRINK = 3


def first_pass_prob(n: int) -> float:
    """min{1, 4 / log2 n}."""
    if n <= 2:
        return 1.0
    return min(1.0, 4.0 / math.log2(n))


@dataclass(frozen=True)
class TwoPassParams:
    n: int
    delta: float = 0.5
    eps: float = 0.5
    d: float = 1.0
    rho_scale: float = 1.0
    seed: int = 0
    L: int | None = None
    K: int | None = None
    max_weight: int = 1

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        ref = RefineParams(self.n, self.eps, self.d, self.rho_scale, self.L, self.K,
                           self.seed, self.max_weight)
        object.__setattr__(self, "L", ref.L)
        object.__setattr__(self, "K", ref.K)

    @classmethod
    def for_stream(cls, stream: EdgeStream, **kw) -> "TwoPassParams":
        kw.setdefault("max_weight", stream.max_weight)
        return cls(n=stream.n, **kw)

    @property
    def refine(self) -> RefineParams:
        return RefineParams(self.n, self.eps, self.d, self.rho_scale, self.L, self.K,
                            self.seed, self.max_weight)

    @property
    def p1(self) -> float:
        return first_pass_prob(self.n)

    @property
    def n_delta(self) -> float:
        return float(self.n) ** self.delta

    @property
    def rho(self) -> float:
        return self.refine.rho

    @property
    def width(self) -> float:
        """Interval width at which the level search stops (delta * L)."""
        return self.delta * self.L

    @property
    def truncation_active(self) -> bool:
        return self.width >= 1.0


@dataclass(frozen=True, eq=False)
class FrozenLadderColumn:
    """Final labels of D_{l,K} for l = 1..L, row l-1 per level."""

    labels: np.ndarray
    admitted: np.ndarray
    admitted_weight: np.ndarray
    state: OnePassState | None = None

    @property
    def L(self) -> int:
        return self.labels.shape[0]

    def chain_ok(self) -> bool:
        """Each level's components nest inside the previous level's."""
        return all(partition_refines(self.labels[l], self.labels[l - 1])
                   for l in range(1, self.L))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrozenLadderColumn):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)


def prefilter(stream: EdgeStream, p: float, coins: CoinOracle) -> tuple[np.ndarray, np.ndarray]:
    """Admit each unit copy with probability p; returns (edge indices, copies)."""
    if p >= 1.0:
        return np.arange(stream.m, dtype=np.int64), np.asarray(stream.w, dtype=np.int64)
    u = coins.coins(np.arange(stream.m), 0, 0, "prefilter")
    copies = binomial_from_uniform(u, stream.w, p)
    idx = np.flatnonzero(copies > 0)
    return idx, copies[idx]


def pass_one(stream: EdgeStream, params: TwoPassParams) -> FrozenLadderColumn:
    """Pre-sample with p1 and run the one-pass ladder on the survivors."""
    coins = CoinOracle(params.seed)
    idx, copies = prefilter(stream, params.p1, coins)
    sub = EdgeStream(stream.n, stream.u[idx], stream.v[idx], copies)
    _, state = onepass_sparsify(sub, params.refine, coins=coins, keys=idx)
    return FrozenLadderColumn(state.column, idx, copies, state)


def truncated_strength_estimate(column, u: int, v: int, delta: float) -> float:
    """2^lo where [lo, hi] brackets the first level separating u and v,
    the search stopping once hi - lo <= delta * L."""
    labels = column.labels if isinstance(column, FrozenLadderColumn) else np.asarray(column)
    lo, _ = kern.truncated_search(labels, int(u), int(v), delta * labels.shape[0])
    return float(2.0 ** lo)


@dataclass(frozen=True, eq=False)
class TwoPassResult:
    sparsifier: Sparsifier
    column: FrozenLadderColumn
    s2: np.ndarray            # truncated estimate s'' per edge
    probs: np.ndarray         # second-pass keep probability per edge
    intermediate: Sparsifier  # output of the second one-pass run
    search_steps: int
    second_state: OnePassState | None

    @property
    def coin_flips(self) -> int:
        flips = self.column.state.coin_flips if self.column.state else 0
        return flips + (self.second_state.coin_flips if self.second_state else 0)

    @property
    def uf_ops(self) -> int:
        ops = self.column.state.uf_ops if self.column.state else 0
        return ops + (self.second_state.uf_ops if self.second_state else 0)


def twopass_run(stream_pass1: EdgeStream, stream_pass2: EdgeStream,
                params: TwoPassParams | None = None, *, shrink: bool = True) -> TwoPassResult:
    for s in (stream_pass1, stream_pass2):
        if not isinstance(s, EdgeStream):
            raise TypeError("twopass requires a replayable stream")
    if stream_pass1.m != stream_pass2.m or stream_pass1.checksum() != stream_pass2.checksum():
        raise ValueError("stream replay mismatch between the two passes")
    stream = stream_pass2
    params = params if params is not None else TwoPassParams.for_stream(stream)
    if params.n != stream.n:
        raise ValueError("params were built for a different vertex count")

    column = pass_one(stream_pass1, params)

    lo = np.empty(stream.m, dtype=np.int64)
    steps = kern.truncated_search_all(column.labels, np.ascontiguousarray(stream.u),
                                      np.ascontiguousarray(stream.v), params.width, lo)
    s2 = np.exp2(lo.astype(np.float64))
    probs = np.minimum(1.0, params.rho * params.n_delta / (params.eps ** 2 * s2))

    coins = CoinOracle(params.seed)
    copies = binomial_from_uniform(coins.coins(np.arange(stream.m), 0, 0, "keep"), stream.w, probs)
    kept = np.flatnonzero(copies > 0)
    real = copies[kept] / probs[kept]
    cap = weight_cap(stream.n)
    mult = np.minimum(np.ceil(real - 1e-9), cap).astype(np.int64)
    mult = np.maximum(mult, 1)

    second = None
    if len(kept):
        sub = EdgeStream(stream.n, stream.u[kept], stream.v[kept], mult)
        ref = RefineParams.for_stream(sub, eps=params.eps, d=params.d,
                                      rho_scale=params.rho_scale, K=params.K,
                                      seed=params.seed)
        inter, second = onepass_sparsify(sub, ref, coins=coins.derive(_TAG_SECOND),
                                         keys=kept, real_weight=real)
    else:
        inter = Sparsifier(EdgeStream(stream.n, [], [], []).to_graph(), np.zeros(0, np.int64),
                           np.zeros(0, np.int64), np.zeros(0), np.zeros(0))

    final = inter
    if shrink:
        final = shrink_pipeline(inter, params.eps, params.d,
                                seed=int(coins.derive(_TAG_SHRINK).seed),
                                rho_scale=params.rho_scale)
    return TwoPassResult(final, column, s2, probs, inter, int(steps), second)


def twopass_sparsify(stream_pass1: EdgeStream, stream_pass2: EdgeStream,
                     params: TwoPassParams | None = None) -> Sparsifier:
    return twopass_run(stream_pass1, stream_pass2, params).sparsifier
