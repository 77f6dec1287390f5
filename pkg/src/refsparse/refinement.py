"""REFINE and the in-memory refinement sampler (the multi-level reference)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _kernels as kern
from .connectivity import CoinOracle, _role, partition_refines
from .graph import EdgeStream
from .params import RefineParams
from .sparsifier import Sparsifier, emit_edges

__all__ = [
    "Partition",
    "RefineParams",
    "refine",
    "crossing_edges",
    "iter_refinement",
    "refinement_sample",
]


def _canonical(labels) -> np.ndarray:
    labels = np.asarray(labels)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inverse].astype(np.int64)


@dataclass(frozen=True, eq=False)
class Partition:
    """Vertex partition stored as class ids numbered by first appearance."""

    labels: np.ndarray

    def __post_init__(self):
        lab = _canonical(self.labels)
        lab.flags.writeable = False
        object.__setattr__(self, "labels", lab)

    @classmethod
    def whole(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @classmethod
    def from_classes(cls, n: int, classes) -> "Partition":
        lab = -np.ones(n, dtype=np.int64)
        for i, cl in enumerate(classes):
            lab[list(cl)] = i
        if np.any(lab < 0):
            raise ValueError("classes do not cover every vertex")
        return cls(lab)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def count(self) -> int:
        return int(self.labels.max()) + 1 if self.n else 0

    def classes(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(self.count)]
        for x, c in enumerate(self.labels.tolist()):
            out[c].add(x)
        return out

    def refines(self, coarser: "Partition") -> bool:
        return partition_refines(self.labels, coarser.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __repr__(self) -> str:
        return f"Partition({sorted(sorted(c) for c in self.classes())})"


def refine(S: Partition, p: float, edges: EdgeStream, coins: CoinOracle,
           level: int = 1, round: int = 1, role="alg1") -> Partition:
    """Split every class of S into the components spanned by a p-sample of edges.

    An edge is in the sample iff its coin for (level, round, role) is below p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    labels = kern.refine_labels(
        edges.n, edges.u, edges.v, np.arange(edges.m, dtype=np.int64),
        np.ascontiguousarray(S.labels), float(p), coins.raw, level, round, _role(role),
    )
    return Partition(labels)


def crossing_edges(S: Partition, edges: EdgeStream) -> np.ndarray:
    """Indices of edges whose endpoints sit in different classes of S."""
    lab = S.labels
    return np.flatnonzero(lab[edges.u] != lab[edges.v])


def iter_refinement(stream: EdgeStream, params: RefineParams,
                    role="alg1") -> Iterator[tuple[int, int, np.ndarray, np.ndarray]]:
    """Yield (l, k, labels of S_{l,k-1}, labels of S_{l,k}) in computation order.

    Labels are raw union-find roots; compare them with ``partition_refines``.
    """
    coins = CoinOracle(params.seed)
    keys = np.arange(stream.m, dtype=np.int64)
    code = _role(role)
    for l in range(1, params.L + 1):
        prev = np.zeros(stream.n, dtype=np.int64)
        p = 2.0 ** (-l)
        for k in range(1, params.K + 1):
            cur = kern.refine_labels(stream.n, stream.u, stream.v, keys, prev, p,
                                     coins.raw, l, k, code)
            yield l, k, prev, cur
            prev = cur


def refinement_sample(stream: EdgeStream, params: RefineParams,
                      role="alg1") -> tuple[Sparsifier, np.ndarray]:
    """Reference refinement sampler on a unit-weight graph held in memory.

    Returns the sample and L(e) for every edge (L + 1 where the endpoints are
    never separated).  Passing ``role="geom"`` draws the level coins the
    one-pass sampler uses, coupling the two runs edge by edge.
    """
    if not stream.unit_weight:
        raise ValueError("refinement_sample runs on unit-weight graphs only")
    levels = np.full(stream.m, params.L + 1, dtype=np.int64)
    for l, k, _, cur in iter_refinement(stream, params, role):
        if k == params.K:
            newly = (levels > params.L) & (cur[stream.u] != cur[stream.v])
            levels[newly] = l
    probs = params.level_prob(levels)
    sample = emit_edges(stream.n, stream.u, stream.v, stream.w, np.arange(stream.m),
                        probs, CoinOracle(params.seed), levels=levels)
    return sample, levels
