"""Exact strong connectivity of edges: min-cut decomposition plus a
brute-force checker for tiny graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from .graph import CutSpec, EdgeStream, WeightedGraph
from .refinement import Partition

__all__ = [
    "StrengthMap",
    "CutResult",
    "StrengthLimitError",
    "mincut",
    "exact_strengths",
    "brute_strengths",
    "pair_strengths",
    "strong_components",
    "kweak_count",
    "kweak_count_check",
    "strength_with_extra_edge",
    "DEFAULT_MAX_N",
    "BRUTE_MAX_N",
]

DEFAULT_MAX_N = 500
BRUTE_MAX_N = 12


class StrengthLimitError(ValueError):
    """The exact oracle refuses graphs beyond its desk-scale limit."""


def _graph(g) -> WeightedGraph:
    if isinstance(g, EdgeStream):
        return g.to_graph()
    return g


@dataclass(frozen=True, eq=False)
class StrengthMap:
    """Per-edge strengths, in input edge order."""

    values: np.ndarray
    method: str = "exact"

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __eq__(self, other) -> bool:
        if isinstance(other, StrengthMap):
            other = other.values
        return np.array_equal(self.values, np.asarray(other))


@dataclass(frozen=True)
class CutResult:
    value: float
    side: CutSpec


def mincut(graph) -> CutResult:
    """Global minimum cut (maximum-adjacency ordering); side holds vertex 0."""
    g = _graph(graph)
    if g.n < 2:
        raise ValueError("min cut needs at least two vertices")
    value, mask = kern.stoer_wagner(g.adjacency(), np.arange(g.n))
    return CutResult(float(value), CutSpec(np.flatnonzero(mask)))


def pair_strengths(graph, max_n: int = DEFAULT_MAX_N) -> np.ndarray:
    """Matrix S with S[a, b] the largest k such that a k-connected induced
    subgraph holds both a and b (0 if none)."""
    g = _graph(graph)
    if g.n > max_n:
        raise StrengthLimitError(f"exact oracle limited to n <= {max_n} (got {g.n})")
    S, _ = kern.pair_strength_matrix(g.adjacency())
    return S


def exact_strengths(graph, max_n: int = DEFAULT_MAX_N) -> StrengthMap:
    """Strength of every edge via recursive min-cut decomposition.

    Each component H contributes its min-cut value to all pairs inside it.
    Vertices of degree at most that value are peeled (they cannot sit in a
    more connected subgraph); otherwise H is split along its min cut, which
    no more-connected induced subgraph can straddle.
    """
    g = _graph(graph)
    S = pair_strengths(g, max_n)
    return StrengthMap(S[g.u, g.v], "exact")


def brute_strengths(graph) -> StrengthMap:
    """Strengths by enumerating every vertex subset and every cut inside it."""
    g = _graph(graph)
    if g.n > BRUTE_MAX_N:
        raise StrengthLimitError(f"brute-force strengths limited to n <= {BRUTE_MAX_N}")
    vals = kern.brute_strengths(g.n, g.u, g.v, np.ascontiguousarray(g.w))
    return StrengthMap(vals, "brute")


def strong_components(S: np.ndarray, k: float) -> Partition:
    """k-strong components from a pair-strength matrix."""
    n = S.shape[0]
    lab = np.arange(n)
    for a in range(n):
        if lab[a] != a:
            continue
        members = np.flatnonzero(S[a] >= k)
        lab[members] = a
    return Partition(lab)


def kweak_count(strengths, k: float) -> int:
    return int(np.count_nonzero(np.asarray(strengths) < k))


def kweak_count_check(graph, k: float, strengths=None) -> bool:
    """At most k(n-1) edges have strength below k."""
    g = _graph(graph)
    s = exact_strengths(g) if strengths is None else strengths
    return kweak_count(s, k) <= k * (g.n - 1)


def strength_with_extra_edge(A: np.ndarray, S: np.ndarray, u: int, v: int) -> float:
    """Exact strength of a new unit edge (u, v) added to the graph with
    adjacency A and pair strengths S.

    Adding one unit edge raises any cut by at most one, so the answer is
    c or c + 1 with c = S[u, v]; c + 1 needs a (c+1)-connected subgraph
    inside the c-strong component of u once the edge is present.
    """
    c = float(S[u, v])
    if c <= 0:
        return 1.0
    comp = np.flatnonzero(S[u] >= c)
    if u not in comp:
        comp = np.union1d(comp, [u])
    A[u, v] += 1.0
    A[v, u] += 1.0
    try:
        up = kern.reaches_threshold(A, comp, u, v, c + 1.0)
    finally:
        A[u, v] -= 1.0
        A[v, u] -= 1.0
    return c + 1.0 if up else c
