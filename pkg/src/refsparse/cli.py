"""Command-line driver: ``refsparse gen|sparsify|certificate|strength|verify``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from .bk import bk_sample, shrink_pipeline
from .graph import (
    GENERATORS,
    ORDERS,
    ParseError,
    format_edge_stream,
    format_weighted_graph,
    generate,
    parse_edge_stream,
    parse_weighted_graph,
    shuffle_stream,
    write_text,
)
from .params import RefineParams
from .runner import ALGORITHMS, run_algorithm
from .strength import DEFAULT_MAX_N, brute_strengths, exact_strengths
from .streaming import extract_certificate, onepass_sparsify
from .verify import verify_sparsifier

SCHEMA = 1


class CliError(Exception):
    """Contract failure reported as ``error: ...`` with exit code 2."""


@dataclass
class RunReport:
    algorithm: str
    n: int
    m: int
    eps: float
    d: float
    L: int
    K: int
    rho: float
    rho_scale: float
    seed: int
    sample_edges: int
    total_weight: float
    elapsed_ms: float
    coin_flips: int
    uf_ops: int
    shrink: bool = False
    delta: float | None = None
    schema: int = SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _read_stream(path: str):
    return parse_edge_stream(_read_text(path))


def _read_strengths(path: str, m: int) -> np.ndarray:
    vals = np.full(m, np.nan)
    for line in _read_text(path).splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        idx = int(parts[0])
        if not 0 <= idx < m:
            raise CliError(f"strength file names edge {idx}, graph has {m} edges")
        vals[idx] = float(parts[-1])
    if np.isnan(vals).any():
        raise CliError("strength file does not cover every edge")
    return vals


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.12g}"


# ------------------------------------------------------------------ commands


def cmd_gen(args) -> int:
    params = {k: getattr(args, k) for k in ("n", "p", "c", "s", "rows", "cols")
              if getattr(args, k) is not None}
    stream = generate(args.type, seed=args.seed, **params)
    stream = shuffle_stream(stream, args.order, seed=args.seed)
    write_text(args.out, format_edge_stream(stream))
    return 0


def cmd_sparsify(args) -> int:
    if args.delta is not None and args.algo != "twopass":
        raise CliError("--delta only applies to --algo twopass")
    if args.strengths is not None and args.algo != "bk":
        raise CliError("--strengths only applies to --algo bk")
    if args.trials < 1:
        raise CliError("--trials must be >= 1")
    if args.input == "-" and args.algo in ("multipass", "twopass"):
        raise CliError(f"{args.algo} requires a replayable file, not stdin")
    stream = _read_stream(args.input)
    strengths = _read_strengths(args.strengths, stream.m) if args.strengths else None

    report_out = sys.stderr if args.out == "-" and args.report is None else sys.stdout
    lines = []
    for t in range(args.trials):
        seed = args.seed + t
        if args.algo == "bk" and strengths is not None:
            params = RefineParams.for_stream(stream, eps=args.eps, d=args.d,
                                             rho_scale=args.rho_scale, K=args.K, seed=seed)
            sample = bk_sample(stream, strengths, args.eps, args.d, args.rho_scale, seed)
            if args.shrink:
                sample = shrink_pipeline(sample, args.eps, args.d, seed, args.rho_scale)
            flips = ops = 0
            elapsed = 0.0
        else:
            res = run_algorithm(args.algo, stream, eps=args.eps, d=args.d,
                                rho_scale=args.rho_scale, K=args.K, seed=seed,
                                delta=args.delta, shrink=args.shrink)
            params, sample = res.params, res.sparsifier
            flips, ops, elapsed = res.coin_flips, res.uf_ops, res.elapsed_ms
        report = RunReport(args.algo, stream.n, stream.m, args.eps, args.d, params.L, params.K,
                           params.rho_theory, args.rho_scale, seed, sample.m,
                           sample.total_weight, round(elapsed, 3), flips, ops,
                           shrink=bool(args.shrink or args.algo == "twopass"),
                           delta=(0.5 if args.delta is None else args.delta)
                           if args.algo == "twopass" else None)
        lines.append(report.to_json())
        out = args.out
        if args.trials > 1:
            out = args.out.replace("{seed}", str(seed)) if "{seed}" in args.out else None
        if out is not None:
            write_text(out, format_weighted_graph(sample.graph))
    text = "\n".join(lines) + "\n"
    if args.report is not None:
        write_text(args.report, text)
    else:
        report_out.write(text)
    return 0


def cmd_certificate(args) -> int:
    stream = _read_stream(args.input)
    params = RefineParams.for_stream(stream, eps=args.eps, d=args.d, K=args.K, seed=args.seed)
    if not 1 <= args.level <= params.L:
        raise CliError(f"--level must lie in [1, {params.L}]")
    _, state = onepass_sparsify(stream, params)
    idx = extract_certificate(state, args.level)
    write_text(args.out, format_edge_stream(stream.take(idx)))
    return 0


def cmd_strength(args) -> int:
    graph = parse_weighted_graph(_read_text(args.input))
    if args.method == "brute":
        s = brute_strengths(graph)
    else:
        s = exact_strengths(graph, max_n=args.max_n)
    rows = [f"{i} {a} {b} {_fmt_num(x)}"
            for i, (a, b, x) in enumerate(zip(graph.u.tolist(), graph.v.tolist(), s.values))]
    write_text(args.out, "".join(r + "\n" for r in rows))
    return 0


def cmd_verify(args) -> int:
    g = parse_weighted_graph(_read_text(args.graph))
    gp = parse_weighted_graph(_read_text(args.sparsifier))
    report = verify_sparsifier(g, gp, args.eps, args.cuts, args.seed)
    print(json.dumps(report.to_dict(), separators=(",", ":")))
    return 0 if report.passed else 1


# -------------------------------------------------------------------- parser


def _algo_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--K", type=int, default=None, help="refine rounds per level")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refsparse",
                                     description="Cut sparsification by refinement sampling.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated graph as an edge list")
    g.add_argument("--type", required=True, choices=GENERATORS)
    for name, typ in (("n", int), ("p", float), ("c", int), ("s", int), ("rows", int),
                      ("cols", int)):
        g.add_argument(f"--{name}", type=typ)
    g.add_argument("--order", choices=ORDERS, default="as_given")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sparsify", help="run a sparsifier and print a JSON run report")
    s.add_argument("--algo", required=True, choices=ALGORITHMS)
    s.add_argument("--in", dest="input", required=True, help="edge list file or - for stdin")
    s.add_argument("--out", default="-",
                   help="sparsifier destination; with --trials > 1 use a {seed} placeholder")
    s.add_argument("--report", default=None, help="report destination (default stdout)")
    _algo_flags(s)
    s.add_argument("--rho-scale", dest="rho_scale", type=float, default=1.0)
    s.add_argument("--delta", type=float, default=None, help="twopass truncation exponent")
    s.add_argument("--shrink", action="store_true", help="finish with strength resampling")
    s.add_argument("--strengths", default=None, help="bk: 'edge_index u v s' file")
    s.add_argument("--trials", type=int, default=1)
    s.set_defaults(func=cmd_sparsify)

    c = sub.add_parser("certificate", help="edges crossing the final level-l ladder cell")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--level", type=int, required=True)
    c.add_argument("--out", default="-")
    _algo_flags(c)
    c.set_defaults(func=cmd_certificate)

    t = sub.add_parser("strength", help="print 'edge_index u v s_e' lines")
    t.add_argument("--in", dest="input", required=True)
    t.add_argument("--method", choices=("exact", "brute"), default="exact")
    t.add_argument("--max-n", dest="max_n", type=int, default=DEFAULT_MAX_N)
    t.add_argument("--out", default="-")
    t.set_defaults(func=cmd_strength)

    v = sub.add_parser("verify", help="compare cuts of a graph and a sparsifier")
    v.add_argument("--graph", required=True)
    v.add_argument("--sparsifier", required=True)
    v.add_argument("--eps", type=float, default=0.5)
    v.add_argument("--cuts", default="all", help="all | random:N | mincut")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ParseError, ValueError, TypeError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
