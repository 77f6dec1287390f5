"""One-pass and multi-pass refinement sparsifiers over a ladder of union-finds."""

from __future__ import annotations

import math

import numpy as np

from . import _kernels as kern
from .connectivity import CoinOracle, RefinementLadder
from .graph import EdgeStream, WeightedGraph
from .params import RefineParams
from .sparsifier import Sparsifier, emit_edges

__all__ = [
    "OnePassState",
    "Sparsifier",
    "onepass_process_edge",
    "onepass_sparsify",
    "multipass_sparsify",
    "extract_certificate",
    "expand_weighted_edge",
    "weighted_insert_prob",
    "weight_cap",
]


def weight_cap(n: int) -> int:
    """Largest accepted integer edge weight (polynomially bounded: n^4)."""
    return max(1, n) ** 4


def _check_weights(stream: EdgeStream):
    cap = weight_cap(stream.n)
    if stream.m and stream.max_weight > cap:
        raise ValueError(f"edge weight {stream.max_weight} exceeds cap n^4 = {cap}")


def weighted_insert_prob(w: int, l: int) -> float:
    """Probability that at least one of w parallel copies survives a 2^-l coin."""
    return float(kern.insert_prob(l, w))


def expand_weighted_edge(w: int, l: int, k: int, coins: CoinOracle,
                         edge_index: int = 0, cap: int | None = None) -> bool:
    """Insertion decision for an integer-weight edge at cell (l, k).

    One uniform draw decides whether Binomial(w, 2^-l) >= 1.
    """
    if w < 1:
        raise ValueError("weight must be a positive integer")
    if cap is not None and w > cap:
        raise ValueError(f"weight {w} exceeds cap {cap}")
    return coins.coin(edge_index, l, k, "geom") < weighted_insert_prob(w, l)


class OnePassState:
    """Mutable state of the one-pass sampler.

    Holds the ladder, per-edge diagnostics (J* at arrival and the level L'
    used for sampling) and the output accumulated so far.  Call
    :meth:`finalize` before extracting certificates.
    """

    def __init__(self, n: int, params: RefineParams, coins: CoinOracle | None = None,
                 audit_pairs: int = 0):
        self.n = n
        self.params = params
        self.coins = coins if coins is not None else CoinOracle(params.seed)
        self.ladder = RefinementLadder(n, params.L, params.K)
        self.audit_pairs = audit_pairs
        self.t = 0
        self._jstar: list[np.ndarray] = []
        self._levels: list[np.ndarray] = []
        self._parts: list[Sparsifier] = []
        self.column: np.ndarray | None = None
        self.stream: EdgeStream | None = None

    # -- processing

    def feed(self, u, v, w, keys=None, real_weight=None) -> Sparsifier:
        u = np.ascontiguousarray(u, dtype=np.int64)
        v = np.ascontiguousarray(v, dtype=np.int64)
        w = np.ascontiguousarray(w, dtype=np.int64)
        if len(u) and (u.min() < 0 or v.min() < 0 or max(u.max(), v.max()) >= self.n):
            raise IndexError("edge endpoint out of range")
        if keys is None:
            keys = np.arange(self.t, self.t + len(u), dtype=np.int64)
        keys = np.ascontiguousarray(keys, dtype=np.int64)
        jstar = np.empty(len(u), dtype=np.int64)
        levels = np.empty(len(u), dtype=np.int64)
        p = self.params
        kern.onepass_run(self.ladder.parent, self.ladder.rank, p.L, p.K, u, v, w, keys,
                         self.coins.raw, jstar, levels, self.ladder.cell_inserts,
                         self.ladder.counters, self.audit_pairs)
        probs = p.level_prob(levels)
        part = emit_edges(self.n, u, v, w, keys, probs, self.coins, levels=levels, real_weight=real_weight)
        self.t += len(u)
        self._jstar.append(jstar)
        self._levels.append(levels)
        self._parts.append(part)
        return part

    def finalize(self, stream: EdgeStream | None = None) -> "OnePassState":
        self.column = self.ladder.column_labels(self.params.K)
        self.stream = stream
        return self

    # -- results and diagnostics

    @property
    def jstar(self) -> np.ndarray:
        return np.concatenate(self._jstar) if self._jstar else np.zeros(0, dtype=np.int64)

    @property
    def levels(self) -> np.ndarray:
        return np.concatenate(self._levels) if self._levels else np.zeros(0, dtype=np.int64)

    def sparsifier(self) -> Sparsifier:
        parts = self._parts
        if not parts:
            return Sparsifier(WeightedGraph(self.n, [], [], []), np.zeros(0, np.int64),
                              np.zeros(0, np.int64), np.zeros(0), np.zeros(0))
        cat = lambda f: np.concatenate([f(s) for s in parts])  # noqa: E731
        graph = WeightedGraph(self.n, cat(lambda s: s.graph.u), cat(lambda s: s.graph.v),
                              cat(lambda s: s.graph.w))
        return Sparsifier(graph, cat(lambda s: s.edge_index), cat(lambda s: s.level),
                          cat(lambda s: s.prob), cat(lambda s: s.input_probs))

    @property
    def coin_flips(self) -> int:
        return int(self.ladder.counters[kern.CNT_FLIPS])

    @property
    def uf_ops(self) -> int:
        return int(self.ladder.counters[kern.CNT_UF_OPS])

    @property
    def audit_violations(self) -> int:
        return int(self.ladder.counters[kern.CNT_AUDIT_VIOLATIONS])

    @property
    def audit_queries(self) -> int:
        return int(self.ladder.counters[kern.CNT_AUDIT_QUERIES])

    def output_nbytes(self) -> int:
        """Bytes held in emitted samples and per-edge diagnostics (O(m) output,
        not sampler state)."""
        diag = sum(a.nbytes for a in self._jstar) + sum(a.nbytes for a in self._levels)
        return diag + sum(part.nbytes for part in self._parts)

    def weak_counts(self) -> np.ndarray:
        """|E \\ X^J| for J = 1..LK: edges whose endpoints were apart in
        D_{J-1} when they arrived."""
        LK = self.ladder.LK
        hist = np.bincount(self.jstar, minlength=LK + 2)
        # edge e is outside X^J iff J*(e) < J
        return np.cumsum(hist)[: LK]


def onepass_process_edge(state: OnePassState, edge) -> tuple[int, int, float] | None:
    """Process the next stream edge; returns (u, v, weight) if it is emitted."""
    u, v = int(edge[0]), int(edge[1])
    w = int(edge[2]) if len(edge) > 2 else 1
    if u == v:
        raise ValueError("self-loop")
    part = state.feed([u], [v], [w])
    if part.m:
        return int(part.graph.u[0]), int(part.graph.v[0]), float(part.graph.w[0])
    return None


def onepass_sparsify(stream: EdgeStream, params: RefineParams | None = None, *,
                     coins: CoinOracle | None = None, keys=None, real_weight=None,
                     audit_pairs: int = 0) -> tuple[Sparsifier, OnePassState]:
    """Single pass over ``stream``; returns the sample and the finalized state."""
    params = params if params is not None else RefineParams.for_stream(stream)
    if params.n != stream.n:
        raise ValueError("params were built for a different vertex count")
    _check_weights(stream)
    state = OnePassState(stream.n, params, coins, audit_pairs=audit_pairs)
    if stream.m:
        state.feed(stream.u, stream.v, stream.w, keys=keys, real_weight=real_weight)
    state.finalize(stream)
    return state.sparsifier(), state


def multipass_sparsify(stream: EdgeStream, params: RefineParams | None = None, *,
                       return_ladder: bool = False):
    """K passes building D_{l,k} column by column, then one output pass."""
    if not isinstance(stream, EdgeStream):
        raise TypeError("stream not replayable: multipass needs an in-memory EdgeStream")
    params = params if params is not None else RefineParams.for_stream(stream)
    if params.n != stream.n:
        raise ValueError("params were built for a different vertex count")
    _check_weights(stream)
    coins = CoinOracle(params.seed)
    ladder = RefinementLadder(stream.n, params.L, params.K)
    keys = np.arange(stream.m, dtype=np.int64)
    u = np.ascontiguousarray(stream.u)
    v = np.ascontiguousarray(stream.v)
    w = np.ascontiguousarray(stream.w)
    for k in range(1, params.K + 1):
        kern.multipass_pass(ladder.parent, ladder.rank, params.L, params.K, k, u, v, w,
                            keys, coins.raw, ladder.cell_inserts, ladder.counters)
    levels = kern.column_levels(ladder.parent, params.L, params.K, params.K, u, v,
                                ladder.counters)
    sample = emit_edges(stream.n, u, v, w, keys, params.level_prob(levels), coins,
                        levels=levels)
    return (sample, ladder) if return_ladder else sample


def extract_certificate(state: OnePassState, l: int) -> np.ndarray:
    """Indices of stream edges crossing the final D_{l,K}."""
    if state.column is None or state.stream is None:
        raise ValueError("state is not finalized with its stream")
    if not 1 <= l <= state.params.L:
        raise ValueError(f"level {l} outside [1, {state.params.L}]")
    lab = state.column[l - 1]
    s = state.stream
    return np.flatnonzero(lab[s.u] != lab[s.v])


def certificate_size_scale(n: int, l: int) -> float:
    """Reference size 2^l n log^2 n for certificate reports."""
    return (2.0 ** l) * n * math.log2(max(n, 2)) ** 2
