from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["RefineParams", "default_levels", "default_passes", "theory_rho"]

_LOG43 = math.log(4.0 / 3.0)


def theory_rho(n: int, d: float) -> float:
    """Benczur-Karger oversampling constant 16 (d + 2) ln n."""
    return 16.0 * (d + 2.0) * math.log(n) if n > 1 else 0.0


def default_levels(n: int, max_weight: int = 1) -> int:
    """ceil(log2(2 n W)), computed exactly on integers."""
    return max(1, (2 * n * max_weight - 1).bit_length())


def default_passes(n: int, max_weight: int = 1) -> int:
    """ceil(log_{4/3}(n W)) + 1."""
    x = n * max_weight
    if x <= 1:
        return 1
    return math.ceil(math.log(x) / _LOG43 - 1e-9) + 1


@dataclass(frozen=True)
class RefineParams:
    """Parameters shared by the refinement-sampling algorithms.

    ``L`` and ``K`` default to the level and pass counts for ``n`` vertices
    and largest weight ``max_weight``.  ``rho_scale`` multiplies the theory
    constant for experiments where the latter saturates every probability.
    """

    n: int
    eps: float = 0.5
    d: float = 1.0
    rho_scale: float = 1.0
    L: int | None = None
    K: int | None = None
    seed: int = 0
    max_weight: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.d > 0:
            raise ValueError("d must be positive")
        if not self.rho_scale > 0:
            raise ValueError("rho_scale must be positive")
        if self.max_weight < 1:
            raise ValueError("max_weight must be >= 1")
        if self.L is None:
            object.__setattr__(self, "L", default_levels(self.n, self.max_weight))
        if self.K is None:
            object.__setattr__(self, "K", default_passes(self.n, self.max_weight))
        if self.L < 1 or self.K < 1:
            raise ValueError("L and K must be >= 1")

    @classmethod
    def for_stream(cls, stream, **kw) -> "RefineParams":
        kw.setdefault("max_weight", stream.max_weight)
        return cls(n=stream.n, **kw)

    @property
    def rho_theory(self) -> float:
        return theory_rho(self.n, self.d)

    @property
    def rho(self) -> float:
        return self.rho_theory * self.rho_scale

    @property
    def phi(self) -> float:
        return 4.0 * self.rho

    def level_prob(self, level):
        """min{1, 4 rho / (eps^2 2^level)}; works elementwise on arrays."""
        z = np.minimum(1.0, self.phi / (self.eps ** 2 * np.exp2(np.asarray(level, dtype=np.float64))))
        # endpoints never separated: keep with probability 1
        return np.where(np.asarray(level) > self.L, 1.0, z)
