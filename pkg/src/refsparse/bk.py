"""Strength-based importance sampling and the post-processing shrink."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from .connectivity import CoinOracle
from .graph import EdgeStream, WeightedGraph
from .params import theory_rho
from .sparsifier import Sparsifier, emit_edges
from .strength import exact_strengths

__all__ = [
    "SampleProbabilities",
    "theory_probabilities",
    "bk_sample",
    "oversample",
    "shrink_pipeline",
    "SHRINK_SPLIT",
]

# each of the two composed stages gets eps / SHRINK_SPLIT
SHRINK_SPLIT = 3.0


@dataclass(frozen=True, eq=False)
class SampleProbabilities:
    probs: np.ndarray
    provenance: str = "theory"

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if np.any(~(p > 0)) or np.any(p > 1):
            raise ValueError("sampling probabilities must lie in (0, 1]")
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return len(self.probs)

    def expected_size(self, weights=None) -> float:
        """Expected number of kept edges; integer multiplicities count once
        per edge only through P(at least one copy survives)."""
        if weights is None:
            return float(self.probs.sum())
        c = np.ceil(np.asarray(weights, dtype=np.float64))
        return float(np.sum(1.0 - (1.0 - self.probs) ** c))


def _as_graph(graph) -> WeightedGraph:
    return graph.to_graph() if isinstance(graph, EdgeStream) else graph


def theory_probabilities(strengths, n: int, eps: float, d: float = 1.0,
                         rho_scale: float = 1.0) -> SampleProbabilities:
    """p_e = min{rho / (eps^2 s_e), 1} with rho = 16 (d + 2) ln n, scaled."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    s = np.asarray(strengths, dtype=np.float64)
    if np.any(~(s > 0)):
        raise ValueError("strengths must be positive")
    rho = theory_rho(n, d) * rho_scale
    return SampleProbabilities(np.minimum(1.0, rho / (eps * eps * s)), "theory")


def _sample(g: WeightedGraph, probs: np.ndarray, seed: int) -> Sparsifier:
    coins = CoinOracle(seed).derive(kern.ROLE_BK)
    mult = np.maximum(1, np.ceil(g.w)).astype(np.int64)
    keys = np.arange(g.m, dtype=np.int64)
    return emit_edges(g.n, g.u, g.v, mult, keys, probs, coins, real_weight=g.w)


def bk_sample(graph, strengths=None, eps: float = 0.5, d: float = 1.0,
              rho_scale: float = 1.0, seed: int = 0) -> Sparsifier:
    """Independent importance sampling with p_e from edge strengths.

    Strengths default to the exact oracle.  A weighted edge of weight w acts
    as ceil(w) parallel copies sharing its strength, each carrying w/ceil(w).
    """
    g = _as_graph(graph)
    if strengths is None:
        strengths = exact_strengths(g)
    s = np.asarray(strengths, dtype=np.float64)
    if len(s) != g.m:
        raise ValueError(f"missing strength: {len(s)} values for {g.m} edges")
    probs = theory_probabilities(s, g.n, eps, d, rho_scale)
    return _sample(g, probs.probs, seed)


def oversample(graph, probs, seed: int = 0, *, strengths=None, eps: float = 0.5,
               d: float = 1.0, rho_scale: float = 1.0) -> Sparsifier:
    """Sample with caller-supplied probabilities, weighting by their inverse.

    When ``strengths`` is given the probabilities must dominate the theory
    ones; anything lower is a contract error.
    """
    g = _as_graph(graph)
    if not isinstance(probs, SampleProbabilities):
        probs = SampleProbabilities(probs, "overridden")
    if len(probs) != g.m:
        raise ValueError("one probability per edge required")
    if strengths is not None:
        base = theory_probabilities(strengths, g.n, eps, d, rho_scale).probs
        low = np.flatnonzero(probs.probs < base * (1 - 1e-12))
        if len(low):
            raise ValueError(
                f"oversampling contract violated on {len(low)} edges "
                f"(first: edge {low[0]}, {probs.probs[low[0]]:.4g} < {base[low[0]]:.4g})")
    return _sample(g, probs.probs, seed)


def shrink_pipeline(sparsifier, eps: float = 0.5, d: float = 1.0, seed: int = 0,
                    rho_scale: float = 1.0) -> Sparsifier:
    """Resample a weighted sparsifier by exact strengths at eps/3.

    Edge provenance is carried through, so ``edge_index`` still points into
    the original stream.
    """
    if isinstance(sparsifier, Sparsifier):
        g, origin = sparsifier.graph, sparsifier.edge_index
    else:
        g = _as_graph(sparsifier)
        origin = np.arange(g.m, dtype=np.int64)
    cap = float(max(g.n, 1)) ** 4
    if g.m and float(g.w.max()) > cap:
        raise ValueError(f"weight {float(g.w.max()):.6g} exceeds cap n^4 = {cap:.6g}")
    if g.m == 0:
        return Sparsifier(g, origin[:0], np.zeros(0, np.int64), np.zeros(0), np.zeros(0))
    strengths = exact_strengths(g)
    out = bk_sample(g, strengths, eps / SHRINK_SPLIT, d, rho_scale, seed)
    return Sparsifier(out.graph, origin[out.edge_index], out.level, out.prob, out.input_probs)

