"""Ground-truth checks for sparsifiers, certificates and sampled connectivity."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import _kernels as kern
from .graph import EdgeStream, WeightedGraph, generate
from .params import RefineParams
from .strength import mincut

__all__ = [
    "QualityReport",
    "CertificateReport",
    "ShrinkCheck",
    "ScalingRow",
    "verify_sparsifier",
    "verify_certificate",
    "component_shrink_check",
    "shrink_gamma",
    "shrink_eta",
    "size_scaling_report",
    "calibrate_rho_scale",
    "relative_errors",
    "ALL_CUTS_MAX_N",
    "CERT_MAX_N",
]

ALL_CUTS_MAX_N = 20
CERT_MAX_N = 16


def _as_graph(g) -> WeightedGraph:
    if isinstance(g, EdgeStream):
        return g.to_graph()
    if hasattr(g, "graph") and isinstance(g.graph, WeightedGraph):
        return g.graph
    return g


def _arrays(g: WeightedGraph):
    return (np.ascontiguousarray(g.u), np.ascontiguousarray(g.v),
            np.ascontiguousarray(g.w, dtype=np.float64))


@dataclass
class QualityReport:
    mode: str
    eps: float
    cuts_checked: int
    max_rel_error: float
    mincut_rel_error: float | None
    sample_edges: int
    total_weight: float
    zero_cut_violations: int = 0
    worst_cut: list[int] | None = None

    @property
    def passed(self) -> bool:
        return self.max_rel_error <= self.eps and self.zero_cut_violations == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        if not math.isfinite(d["max_rel_error"]):
            d["max_rel_error"] = None
        return d


def relative_errors(orig, approx) -> tuple[np.ndarray, int]:
    """Per-cut |w'(C) - w(C)| / w(C); zero cuts must stay zero (else inf)."""
    orig = np.asarray(orig, dtype=np.float64)
    approx = np.asarray(approx, dtype=np.float64)
    zero = orig == 0
    err = np.empty_like(orig)
    err[~zero] = np.abs(approx[~zero] - orig[~zero]) / orig[~zero]
    bad = zero & (approx != 0)
    err[zero] = 0.0
    err[bad] = np.inf
    return err, int(np.count_nonzero(bad))


def _mask_to_side(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if (mask >> i) & 1]


def _random_sides(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform nonempty proper subsets as boolean rows."""
    out = np.empty((count, n), dtype=bool)
    filled = 0
    while filled < count:
        rows = rng.random((count - filled, n)) < 0.5
        k = rows.sum(axis=1)
        rows = rows[(k > 0) & (k < n)]
        out[filled:filled + len(rows)] = rows
        filled += len(rows)
    return out


def _cut_values_rows(g: WeightedGraph, sides: np.ndarray, chunk: int = 64) -> np.ndarray:
    vals = np.empty(len(sides))
    for a in range(0, len(sides), chunk):
        s = sides[a:a + chunk]
        vals[a:a + chunk] = (s[:, g.u] != s[:, g.v]) @ g.w
    return vals


def verify_sparsifier(G, Gp, eps: float = 0.5, mode: str = "all", seed: int = 0) -> QualityReport:
    """Compare cuts of G and G'.

    ``mode`` is ``all`` (every cut, n <= 20), ``random:N`` (N uniform
    nonempty proper subsets) or ``mincut`` (global minimum cut values).
    """
    g, gp = _as_graph(G), _as_graph(Gp)
    if g.n != gp.n:
        raise ValueError(f"vertex counts differ: {g.n} vs {gp.n}")
    n = g.n
    common = dict(eps=eps, sample_edges=gp.m, total_weight=gp.total_weight)
    if n < 2:
        return QualityReport(mode, cuts_checked=0, max_rel_error=0.0, mincut_rel_error=None,
                             **common)
    if mode == "all":
        if n > ALL_CUTS_MAX_N:
            raise ValueError(f"mode all enumerates 2^(n-1) cuts; n <= {ALL_CUTS_MAX_N} required")
        a = kern.all_cut_values(n, *_arrays(g))
        b = kern.all_cut_values(n, *_arrays(gp))
        err, zero_bad = relative_errors(a, b)
        worst = int(np.argmax(err))
        mc = float(a.min())
        mce = abs(float(b.min()) - mc) / mc if mc > 0 else (0.0 if b.min() == 0 else math.inf)
        return QualityReport(mode, cuts_checked=len(a), max_rel_error=float(err[worst]),
                             mincut_rel_error=mce, zero_cut_violations=zero_bad,
                             worst_cut=_mask_to_side((worst << 1) | 1, n), **common)
    if mode.startswith("random:"):
        try:
            count = int(mode.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad cut mode {mode!r}") from None
        if count < 1:
            raise ValueError("random mode needs at least one cut")
        sides = _random_sides(n, count, np.random.default_rng(seed))
        err, zero_bad = relative_errors(_cut_values_rows(g, sides), _cut_values_rows(gp, sides))
        worst = int(np.argmax(err))
        return QualityReport(mode, cuts_checked=count, max_rel_error=float(err[worst]),
                             mincut_rel_error=None, zero_cut_violations=zero_bad,
                             worst_cut=np.flatnonzero(sides[worst]).tolist(), **common)
    if mode == "mincut":
        a, b = mincut(g), mincut(gp)
        err, zero_bad = relative_errors([a.value], [b.value])
        return QualityReport(mode, cuts_checked=1, max_rel_error=float(err[0]),
                             mincut_rel_error=float(err[0]), zero_cut_violations=zero_bad,
                             worst_cut=sorted(b.side.side), **common)
    raise ValueError(f"unknown cut mode {mode!r} (all, random:N, mincut)")


@dataclass
class CertificateReport:
    ok: bool
    level: int
    size: int
    size_scale: float
    violations: list[tuple[list[int], list[tuple[int, int]]]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(G, cert_edges, l: int) -> CertificateReport:
    """Every edge crossing a cut of value <= 2^l must be in the certificate.

    ``cert_edges`` holds indices into G's edge list.
    """
    g = _as_graph(G)
    if g.n > CERT_MAX_N:
        raise ValueError(f"certificate check enumerates all cuts; n <= {CERT_MAX_N} required")
    in_cert = np.zeros(g.m, dtype=np.bool_)
    idx = np.asarray(cert_edges, dtype=np.int64)
    if len(idx) and (idx.min() < 0 or idx.max() >= g.m):
        raise IndexError("certificate edge index out of range")
    in_cert[idx] = True
    scale = (2.0 ** l) * g.n * math.log2(max(g.n, 2)) ** 2
    if g.n < 2:
        return CertificateReport(True, l, int(in_cert.sum()), scale)
    sides = kern.certificate_violations(g.n, *_arrays(g), in_cert, float(2 ** l))
    violations = []
    for mask in sides.tolist():
        on = np.array([(mask >> i) & 1 for i in range(g.n)], dtype=bool)
        cross = (on[g.u] != on[g.v]) & ~in_cert
        missing = [(int(g.u[e]), int(g.v[e])) for e in np.flatnonzero(cross)]
        violations.append((_mask_to_side(mask, g.n), missing))
    return CertificateReport(not violations, l, int(in_cert.sum()), scale, violations)


def shrink_gamma(lam: float) -> float:
    """Component-count ratio bound 7/8 + e^{-lam/2} / 8."""
    return 7.0 / 8.0 + math.exp(-lam / 2.0) / 8.0


def shrink_eta(lam: float) -> float:
    return 1.0 - math.exp(-lam / 2.0)


@dataclass
class ShrinkCheck:
    pass_rate: float
    gamma: float
    eta: float
    expected_rate: float
    p: float
    components: np.ndarray

    @property
    def trials(self) -> int:
        return len(self.components)


def component_shrink_check(graph, lam: float, trials: int, seed: int = 0,
                           kappa: float | None = None) -> ShrinkCheck:
    """Sample edges with p = lam/kappa and count components against gamma |V|.

    kappa defaults to the graph's min cut.  p above 1 is clamped to 1.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g = _as_graph(graph)
    if kappa is None:
        kappa = mincut(g).value
    if not kappa > 0:
        raise ValueError("graph must be connected (kappa > 0)")
    p = min(1.0, lam / kappa)
    gamma = shrink_gamma(lam)
    eta = shrink_eta(lam)
    u, v, _ = _arrays(g)
    keys = np.arange(g.m, dtype=np.int64)
    seed64 = np.uint64(seed & ((1 << 64) - 1))
    comps = np.array([kern.sampled_components(g.n, u, v, keys, p, seed64, t)
                      for t in range(trials)])
    rate = float(np.mean(comps <= gamma * g.n))
    return ShrinkCheck(rate, gamma, eta, 1.0 - math.exp(-eta * g.n), p, comps)


@dataclass
class ScalingRow:
    n: int
    mean_size: float
    ratio: float | None


def _family(family) -> Callable[[int, int], EdgeStream]:
    if callable(family):
        return family
    if family.startswith("gnp:"):
        deg = float(family.split(":", 1)[1])
        return lambda n, s: generate("gnp", seed=s, n=n, p=min(1.0, deg / (n - 1)))
    raise ValueError(f"unknown family {family!r} (use gnp:<expected degree> or a callable)")


def size_scaling_report(algo, family, sizes, seeds, **algo_kw) -> list[ScalingRow]:
    """Mean sample size per n and the ratio to the previous size.

    ``algo`` is a callable (stream, seed) -> Sparsifier or one of the names
    accepted by :func:`refsparse.runner.run_algorithm`.
    """
    from .runner import run_algorithm

    make = _family(family)
    if isinstance(algo, str):
        name = algo
        algo = lambda st, s: run_algorithm(name, st, seed=s, **algo_kw).sparsifier  # noqa: E731
    rows: list[ScalingRow] = []
    prev = None
    for n in sizes:
        mean = float(np.mean([algo(make(n, s), s).m for s in seeds]))
        rows.append(ScalingRow(n, mean, None if prev is None else mean / prev))
        prev = mean
    return rows


def calibrate_rho_scale(stream: EdgeStream, target: float, *, eps: float = 0.5,
                        seed: int = 0, **param_kw) -> float:
    """rho_scale giving the one-pass run a mean sampling probability ``target``.

    Levels do not depend on rho, so one run fixes them and the mean
    probability is monotone in rho_scale; solved by bisection in log space.
    """
    from .streaming import onepass_sparsify

    if not 0 < target <= 1:
        raise ValueError("target must lie in (0, 1]")
    base = RefineParams.for_stream(stream, eps=eps, seed=seed, **param_kw)
    _, state = onepass_sparsify(stream, base)
    levels = state.levels

    def mean_z(scale: float) -> float:
        p = RefineParams.for_stream(stream, eps=eps, seed=seed, rho_scale=scale, **param_kw)
        return float(np.mean(p.level_prob(levels)))

    lo, hi = 1e-12, 1.0
    while mean_z(hi) < target:
        hi *= 2
    for _ in range(80):
        mid = math.sqrt(lo * hi)
        if mean_z(mid) < target:
            lo = mid
        else:
            hi = mid
    return hi

