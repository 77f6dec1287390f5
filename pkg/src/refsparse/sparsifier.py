from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .graph import WeightedGraph

__all__ = ["Sparsifier", "emit_edges"]


@dataclass(frozen=True, eq=False)
class Sparsifier:
    """Weighted output sample with per-edge provenance.

    ``edge_index`` points back into the input stream, ``level`` is the
    strength level used for the edge (0 when not level-based) and ``prob``
    its sampling probability.  ``input_probs`` holds the probability assigned
    to every input edge, kept or not.
    """

    graph: WeightedGraph
    edge_index: np.ndarray
    level: np.ndarray
    prob: np.ndarray
    input_probs: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def total_weight(self) -> float:
        return self.graph.total_weight

    @property
    def mean_input_prob(self) -> float:
        if self.input_probs is None or len(self.input_probs) == 0:
            return float("nan")
        return float(np.mean(self.input_probs))

    @property
    def nbytes(self) -> int:
        arrs = [self.graph.u, self.graph.v, self.graph.w, self.edge_index, self.level, self.prob]
        if self.input_probs is not None:
            arrs.append(self.input_probs)
        return sum(int(np.asarray(a).nbytes) for a in arrs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sparsifier):
            return NotImplemented
        return (
            self.graph == other.graph
            and np.array_equal(self.edge_index, other.edge_index)
            and np.array_equal(self.level, other.level)
            and np.array_equal(self.prob, other.prob)
        )


def binomial_from_uniform(uniform, trials, p) -> np.ndarray:
    """Inverse-survival Binomial(trials, p) draw driven by one uniform each.

    For a single trial this is exactly ``uniform < p``.
    """
    uniform = np.asarray(uniform, dtype=np.float64)
    trials = np.broadcast_to(np.asarray(trials, dtype=np.int64), uniform.shape)
    p = np.broadcast_to(np.asarray(p, dtype=np.float64), uniform.shape)
    out = np.where(uniform < p, 1, 0).astype(np.int64)
    out = np.where(p >= 1.0, trials, out)
    multi = (trials > 1) & (p < 1.0)
    if np.any(multi):
        out[multi] = stats.binom.isf(uniform[multi], trials[multi], p[multi]).astype(np.int64)
    return out


def emit_edges(n, u, v, w, keys, probs, coins, *, levels=None, real_weight=None) -> Sparsifier:
    """Keep each input edge with its probability, reweighting by 1/prob.

    An integer weight w is treated as w parallel copies, of which a
    Binomial(w, prob) number survive.  ``real_weight`` is the true weight of
    the whole edge when w is only its rounded-up multiplicity (default w).
    """
    u = np.asarray(u, dtype=np.int64)
    probs = np.asarray(probs, dtype=np.float64)
    w = np.asarray(w, dtype=np.int64)
    if np.any(probs <= 0) or np.any(probs > 1):
        raise ValueError("sampling probabilities must lie in (0, 1]")
    uniform = coins.coins(keys, 0, 0, "emit")
    count = binomial_from_uniform(uniform, w, probs)
    keep = np.flatnonzero(count > 0)
    if real_weight is None:
        weight = count[keep] / probs[keep]
    else:
        rw = np.asarray(real_weight, dtype=np.float64)[keep]
        full = count[keep] == w[keep]
        # all copies kept at prob 1 gives back the exact input weight
        weight = np.where(full & (probs[keep] == 1.0), rw, rw * count[keep] / (w[keep] * probs[keep]))
    graph = WeightedGraph(n, u[keep], np.asarray(v)[keep], weight)
    lv = np.zeros(len(u), dtype=np.int64) if levels is None else np.asarray(levels, dtype=np.int64)
    return Sparsifier(graph, np.asarray(keys, dtype=np.int64)[keep], lv[keep], probs[keep], probs)
