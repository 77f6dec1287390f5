"""Union-find, the refinement ladder of connectivity cells, and the coin oracle."""

from __future__ import annotations

import numpy as np

from . import _kernels as kern

__all__ = [
    "UnionFind",
    "RefinementLadder",
    "CoinOracle",
    "ROLES",
    "uf_union",
    "uf_connected",
    "ladder_threshold",
    "level_threshold",
    "partition_refines",
]

_MASK64 = (1 << 64) - 1

ROLES = {
    "fair": kern.ROLE_FAIR,
    "geom": kern.ROLE_GEOM,
    "alg1": kern.ROLE_ALG1,
    "emit": kern.ROLE_EMIT,
    "prefilter": kern.ROLE_PREFILTER,
    "keep": kern.ROLE_KEEP,
    "bk": kern.ROLE_BK,
    "audit": kern.ROLE_AUDIT,
}


def _role(role) -> int:
    if isinstance(role, str):
        try:
            return ROLES[role]
        except KeyError:
            raise ValueError(f"unknown coin role {role!r}") from None
    return int(role)


class CoinOracle:
    """Deterministic uniform coins keyed by (edge index, level, pass, role).

    Coins are a pure function of the key, so two algorithms holding the same
    seed see the same value for the same (e, l, k, role) without sharing any
    tape.
    """

    __slots__ = ("seed",)

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & _MASK64

    def __repr__(self) -> str:
        return f"CoinOracle(seed={self.seed})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CoinOracle) and other.seed == self.seed

    def __hash__(self) -> int:
        return hash(self.seed)

    @property
    def raw(self) -> np.uint64:
        return np.uint64(self.seed)

    def coin(self, edge_index: int, l: int, k: int, role="geom") -> float:
        return float(kern.coin(self.raw, int(edge_index), int(l), int(k), _role(role)))

    def coins(self, edge_indices, l: int, k: int, role="geom") -> np.ndarray:
        keys = np.ascontiguousarray(edge_indices, dtype=np.int64)
        return kern.coin_array(self.raw, keys, int(l), int(k), _role(role))

    def derive(self, tag: int) -> "CoinOracle":
        """Independent oracle for a separate stage (e.g. a second pipeline pass)."""
        return CoinOracle(int(kern.derive_seed(self.raw, int(tag))))


class UnionFind:
    """Disjoint sets over 0..n-1, union by rank with full path compression."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self._parent = np.arange(n, dtype=np.int32).reshape(1, n)
        self._rank = np.zeros((1, n), dtype=np.int8)
        self.components = n

    def _check(self, *xs):
        for x in xs:
            if not 0 <= x < self.n:
                raise IndexError(f"element {x} out of range [0, {self.n})")

    def find(self, x: int) -> int:
        self._check(x)
        return int(kern.uf_find(self._parent, 0, x))

    def union(self, x: int, y: int) -> bool:
        self._check(x, y)
        merged = bool(kern.uf_union(self._parent, self._rank, 0, x, y))
        if merged:
            self.components -= 1
        return merged

    def connected(self, x: int, y: int) -> bool:
        self._check(x, y)
        return bool(kern.uf_connected(self._parent, 0, x, y))

    def labels(self) -> np.ndarray:
        return kern.uf_roots(self._parent, 0)


def uf_union(uf: UnionFind, u: int, v: int) -> bool:
    return uf.union(u, v)


def uf_connected(uf: UnionFind, u: int, v: int) -> bool:
    return uf.connected(u, v)


def partition_refines(fine, coarse) -> bool:
    """True iff every class of ``fine`` lies inside one class of ``coarse``."""
    fine = np.asarray(fine)
    coarse = np.asarray(coarse)
    pairs = np.unique(np.stack([fine, coarse]), axis=1)
    return len(np.unique(pairs[0])) == pairs.shape[1]


class RefinementLadder:
    """The L x K grid of union-find cells D_{l,k}, addressed also as D_J with
    J = K(l-1) + k.  D_0 is virtual and connects everything.

    ``counters`` accumulates coin flips and union-find operations for callers
    that drive the ladder through the compiled kernels.
    """

    def __init__(self, n: int, L: int, K: int):
        if n < 1 or L < 1 or K < 1:
            raise ValueError("need n, L, K >= 1")
        self.n, self.L, self.K = n, L, K
        self.parent = np.tile(np.arange(n, dtype=np.int32), (L * K, 1))
        self.rank = np.zeros((L * K, n), dtype=np.int8)
        self.cell_inserts = np.zeros(L * K, dtype=np.int64)
        self.counters = np.zeros(kern.N_COUNTERS, dtype=np.int64)

    @property
    def LK(self) -> int:
        return self.L * self.K

    def cell(self, l: int, k: int) -> int:
        if not (1 <= l <= self.L and 1 <= k <= self.K):
            raise IndexError(f"cell ({l}, {k}) outside {self.L} x {self.K} ladder")
        return self.K * (l - 1) + k

    def split(self, J: int) -> tuple[int, int]:
        return (J - 1) // self.K + 1, (J - 1) % self.K + 1

    def _vertex(self, *xs):
        for x in xs:
            if not 0 <= x < self.n:
                raise IndexError(f"vertex {x} out of range [0, {self.n})")

    def connected(self, J: int, u: int, v: int) -> bool:
        self._vertex(u, v)
        if not 0 <= J <= self.LK:
            raise IndexError(f"cell {J} outside [0, {self.LK}]")
        return bool(kern.cell_connected(self.parent, J, u, v, self.counters))

    def insert(self, J: int, u: int, v: int) -> bool:
        """Merge u and v in D_J; refuses unless they are connected in D_{J-1}."""
        self._vertex(u, v)
        if not 1 <= J <= self.LK:
            raise IndexError(f"cell {J} outside [1, {self.LK}]")
        if not self.connected(J - 1, u, v):
            raise ValueError(f"({u}, {v}) not connected in D_{J - 1}; insertion would break the chain")
        self.counters[kern.CNT_UF_OPS] += 2
        merged = bool(kern.uf_union(self.parent, self.rank, J - 1, u, v))
        self.cell_inserts[J - 1] += 1
        return merged

    def threshold(self, u: int, v: int) -> int:
        self._vertex(u, v)
        return int(kern.ladder_threshold(self.parent, self.LK, u, v, self.counters))

    def level_threshold(self, u: int, v: int, column: int | None = None) -> int:
        self._vertex(u, v)
        col = self.K if column is None else column
        return int(kern.column_threshold(self.parent, self.L, self.K, col, u, v, self.counters))

    def cell_labels(self, J: int) -> np.ndarray:
        if J == 0:
            return np.zeros(self.n, dtype=np.int64)
        return kern.uf_roots(self.parent, J - 1)

    def column_labels(self, k: int | None = None) -> np.ndarray:
        """Root ids of D_{l,k} for l = 1..L, shape (L, n)."""
        k = self.K if k is None else k
        return np.stack([self.cell_labels(self.cell(l, k)) for l in range(1, self.L + 1)])

    def chain_violations(self) -> int:
        """Number of J for which D_J fails to refine D_{J-1}."""
        prev = self.cell_labels(0)
        bad = 0
        for J in range(1, self.LK + 1):
            cur = self.cell_labels(J)
            if not partition_refines(cur, prev):
                bad += 1
            prev = cur
        return bad

    def grid_violations(self) -> int:
        """Refinement failures along rows and columns of the grid (the
        relation maintained by the multi-pass algorithm)."""
        labels = {(l, k): self.cell_labels(self.cell(l, k))
                  for l in range(1, self.L + 1) for k in range(1, self.K + 1)}
        bad = 0
        for (l, k), lab in labels.items():
            if k > 1 and not partition_refines(lab, labels[(l, k - 1)]):
                bad += 1
            if l > 1 and not partition_refines(lab, labels[(l - 1, k)]):
                bad += 1
        return bad

    def audit_pairs(self, pairs) -> int:
        """Chain monotonicity violations over the given vertex pairs."""
        bad = 0
        for a, b in pairs:
            bad += int(kern.audit_chain_pair(self.parent, self.LK, int(a), int(b)))
        return bad

    def nbytes(self) -> int:
        return self.parent.nbytes + self.rank.nbytes


def ladder_threshold(ladder: RefinementLadder, u: int, v: int) -> int:
    """Smallest J in [1..LK+1] with u, v apart in D_J (binary search)."""
    return ladder.threshold(u, v)


def level_threshold(ladder: RefinementLadder, u: int, v: int) -> int:
    """Smallest l in [1..L+1] with u, v apart in D_{l,K}."""
    return ladder.level_threshold(u, v)
