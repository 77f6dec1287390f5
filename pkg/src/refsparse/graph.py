"""Graph and stream types, edge-list I/O, cut evaluation and generators."""

from __future__ import annotations

import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, TextIO

import numpy as np

__all__ = [
    "Edge",
    "EdgeStream",
    "WeightedGraph",
    "CutSpec",
    "ParseError",
    "parse_edge_stream",
    "parse_weighted_graph",
    "read_edge_stream",
    "read_weighted_graph",
    "format_edge_stream",
    "format_weighted_graph",
    "cut_value",
    "generate",
    "shuffle_stream",
    "GENERATORS",
    "ORDERS",
]


class ParseError(ValueError):
    """Malformed edge-list input; ``line`` is 1-based."""

    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class Edge(NamedTuple):
    u: int
    v: int
    w: int = 1


def _frozen(a, dtype) -> np.ndarray:
    a = np.array(a, dtype=dtype).reshape(-1)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class EdgeStream:
    """An ordered multiset of integer-weighted edges over vertices 0..n-1.

    The arrays are read-only; replaying the stream always yields the same
    sequence.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(self.u, np.int64))
        object.__setattr__(self, "v", _frozen(self.v, np.int64))
        object.__setattr__(self, "w", _frozen(self.w, np.int64))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not (len(self.u) == len(self.v) == len(self.w)):
            raise ValueError("endpoint and weight arrays differ in length")
        if len(self.u):
            if self.u.min() < 0 or self.v.min() < 0 or max(self.u.max(), self.v.max()) >= self.n:
                raise ValueError("vertex id out of range")
            if np.any(self.u == self.v):
                raise ValueError("self-loops are not allowed")
            if self.w.min() < 1:
                raise ValueError("weights must be positive integers")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "EdgeStream":
        rows = [tuple(e) for e in edges]
        u = [r[0] for r in rows]
        v = [r[1] for r in rows]
        w = [r[2] if len(r) > 2 else 1 for r in rows]
        return cls(n, u, v, w)

    @property
    def m(self) -> int:
        return len(self.u)

    @property
    def edges(self) -> list[Edge]:
        return [Edge(int(a), int(b), int(c)) for a, b, c in zip(self.u, self.v, self.w)]

    @property
    def max_weight(self) -> int:
        return int(self.w.max()) if self.m else 1

    @property
    def unit_weight(self) -> bool:
        return self.m == 0 or bool(np.all(self.w == 1))

    def __len__(self) -> int:
        return self.m

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeStream):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.w, other.w)
        )

    def take(self, idx) -> "EdgeStream":
        idx = np.asarray(idx, dtype=np.int64)
        return EdgeStream(self.n, self.u[idx], self.v[idx], self.w[idx])

    def checksum(self) -> int:
        """Order-sensitive digest used to detect replay mismatches."""
        h = np.uint64(self.n)
        if self.m:
            a = np.stack([self.u, self.v, self.w]).astype(np.uint64)
            pos = np.arange(1, self.m + 1, dtype=np.uint64)
            with np.errstate(over="ignore"):
                mixed = (a[0] * np.uint64(0x9E3779B1) + a[1] * np.uint64(0x85EBCA77)
                         + a[2] * np.uint64(0xC2B2AE3D)) * (pos * np.uint64(2) + np.uint64(1))
                h = h ^ np.bitwise_xor.reduce(mixed) ^ np.uint64(self.m)
        return int(h)

    def to_graph(self) -> "WeightedGraph":
        return WeightedGraph(self.n, self.u, self.v, self.w.astype(np.float64))


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected graph with positive real edge weights (parallel edges allowed)."""

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(self.u, np.int64))
        object.__setattr__(self, "v", _frozen(self.v, np.int64))
        object.__setattr__(self, "w", _frozen(self.w, np.float64))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not (len(self.u) == len(self.v) == len(self.w)):
            raise ValueError("endpoint and weight arrays differ in length")
        if len(self.u):
            if self.u.min() < 0 or self.v.min() < 0 or max(self.u.max(), self.v.max()) >= self.n:
                raise ValueError("vertex id out of range")
            if np.any(self.u == self.v):
                raise ValueError("self-loops are not allowed")
            if not np.all(self.w > 0):
                raise ValueError("weights must be positive")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "WeightedGraph":
        rows = [tuple(e) for e in edges]
        return cls(
            n,
            [r[0] for r in rows],
            [r[1] for r in rows],
            [r[2] if len(r) > 2 else 1.0 for r in rows],
        )

    @property
    def m(self) -> int:
        return len(self.u)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.u, self.v, self.w)]

    @property
    def total_weight(self) -> float:
        return float(self.w.sum())

    def __len__(self) -> int:
        return self.m

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.w, other.w)
        )

    def adjacency(self) -> np.ndarray:
        """Dense symmetric weight matrix with parallel edges summed."""
        A = np.zeros((self.n, self.n), dtype=np.float64)
        np.add.at(A, (self.u, self.v), self.w)
        np.add.at(A, (self.v, self.u), self.w)
        return A

    def canonical(self) -> list[tuple[int, int, float]]:
        """Edges with u < v, sorted; for order-insensitive comparison."""
        return sorted((min(a, b), max(a, b), w) for a, b, w in self.edges)


@dataclass(frozen=True)
class CutSpec:
    """One side S of the cut (S, V \\ S)."""

    side: frozenset

    def __init__(self, side):
        object.__setattr__(self, "side", frozenset(int(x) for x in side))

    def mask(self, n: int) -> np.ndarray:
        if any(x < 0 or x >= n for x in self.side):
            raise ValueError("cut side has a vertex outside the graph")
        if not self.side or len(self.side) >= n:
            raise ValueError("cut side must be a nonempty proper subset of V")
        m = np.zeros(n, dtype=bool)
        m[list(self.side)] = True
        return m

    def complement(self, n: int) -> "CutSpec":
        return CutSpec(set(range(n)) - self.side)


def cut_value(graph, cut) -> float:
    """Total weight of edges with exactly one endpoint in ``cut.side``."""
    if not isinstance(cut, CutSpec):
        cut = CutSpec(cut)
    if isinstance(graph, EdgeStream):
        graph = graph.to_graph()
    inside = cut.mask(graph.n)
    crossing = inside[graph.u] != inside[graph.v]
    return float(graph.w[crossing].sum())


# ------------------------------------------------------------------ text I/O


def _data_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line


def _parse(text: str, weight_type):
    lines = _data_lines(text)
    try:
        no, header = next(lines)
    except StopIteration:
        raise ParseError(1, "missing vertex count") from None
    try:
        n = int(header)
    except ValueError:
        raise ParseError(no, f"expected vertex count, got {header!r}") from None
    if n < 1:
        raise ParseError(no, "vertex count must be >= 1")
    us, vs, ws = [], [], []
    for no, line in lines:
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(no, f"expected 'u v' or 'u v w', got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
            w = weight_type(parts[2]) if len(parts) == 3 else weight_type(1)
        except ValueError:
            raise ParseError(no, f"malformed number in {line!r}") from None
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError(no, f"vertex id out of range [0, {n})")
        if a == b:
            raise ParseError(no, "self-loop")
        if not w > 0 or (weight_type is float and not math.isfinite(w)):
            raise ParseError(no, "weight must be positive")
        us.append(a)
        vs.append(b)
        ws.append(w)
    return n, us, vs, ws


def parse_edge_stream(source) -> EdgeStream:
    """Parse the integer-weighted edge-list format from a string or text file."""
    text = source if isinstance(source, str) else source.read()
    return EdgeStream(*_parse(text, int))


def parse_weighted_graph(source) -> WeightedGraph:
    """Like :func:`parse_edge_stream` but accepts real weights."""
    text = source if isinstance(source, str) else source.read()
    return WeightedGraph(*_parse(text, float))


def read_edge_stream(path) -> EdgeStream:
    return parse_edge_stream(Path(path).read_text())


def read_weighted_graph(path) -> WeightedGraph:
    return parse_weighted_graph(Path(path).read_text())


def format_edge_stream(stream: EdgeStream) -> str:
    out = io.StringIO()
    out.write(f"{stream.n}\n")
    for a, b, w in zip(stream.u.tolist(), stream.v.tolist(), stream.w.tolist()):
        if w == 1:
            out.write(f"{a} {b}\n")
        else:
            out.write(f"{a} {b} {w}\n")
    return out.getvalue()


def format_weighted_graph(graph: WeightedGraph) -> str:
    out = io.StringIO()
    out.write(f"{graph.n}\n")
    for a, b, w in zip(graph.u.tolist(), graph.v.tolist(), graph.w.tolist()):
        out.write(f"{a} {b} {w:.12g}\n")
    return out.getvalue()


def write_text(path, text: str, stdout: TextIO | None = None) -> None:
    if str(path) == "-":
        (stdout or sys.stdout).write(text)
    else:
        Path(path).write_text(text)


# --------------------------------------------------------------- generators


def _gnp(n: int, p: float, rng: np.random.Generator):
    if not 0.0 <= p <= 1.0:
        raise ValueError("gnp needs 0 <= p <= 1")
    total = n * (n - 1) // 2
    if total == 0:
        return [], []
    if total <= 5_000_000:
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(total) < p
        return iu[keep], ju[keep]
    # large sparse case: exact G(n, p) via binomial count + uniform distinct pairs
    count = int(rng.binomial(total, p))
    picked = np.unique(rng.integers(0, total, size=count))
    while len(picked) < count:
        extra = rng.integers(0, total, size=count - len(picked))
        picked = np.unique(np.concatenate([picked, extra]))
    # pair index -> (i, j), i < j, row-major over the upper triangle
    idx = picked.astype(np.float64)
    i = np.floor((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * idx)) / 2).astype(np.int64)
    start = i * (2 * n - i - 1) // 2
    # guard float rounding at row boundaries
    over = start > picked
    i[over] -= 1
    start = i * (2 * n - i - 1) // 2
    under = picked - start >= n - 1 - i
    i[under] += 1
    start = i * (2 * n - i - 1) // 2
    j = picked - start + i + 1
    return i, j


def generate(kind: str, seed: int = 0, **params) -> EdgeStream:
    """Deterministic graph families.

    ``gnp(n, p)``, ``star(n)``, ``clique_chain(c, s)`` (c cliques of size s
    joined in a path by single bridges), ``grid(rows, cols)``.
    """
    rng = np.random.default_rng(seed)
    try:
        if kind == "gnp":
            n = int(params["n"])
            if n < 1:
                raise ValueError("n must be >= 1")
            u, v = _gnp(n, float(params["p"]), rng)
        elif kind == "star":
            n = int(params["n"])
            if n < 1:
                raise ValueError("n must be >= 1")
            u, v = [0] * (n - 1), list(range(1, n))
        elif kind == "clique_chain":
            c, s = int(params["c"]), int(params["s"])
            if c < 1 or s < 1:
                raise ValueError("clique_chain needs c >= 1 and s >= 1")
            n = c * s
            u, v = [], []
            for b in range(c):
                base = b * s
                for i in range(s):
                    for j in range(i + 1, s):
                        u.append(base + i)
                        v.append(base + j)
                if b + 1 < c:
                    u.append(base + s - 1)
                    v.append(base + s)
        elif kind == "grid":
            rows, cols = int(params["rows"]), int(params["cols"])
            if rows < 1 or cols < 1:
                raise ValueError("grid needs rows >= 1 and cols >= 1")
            n = rows * cols
            u, v = [], []
            for r in range(rows):
                for q in range(cols):
                    x = r * cols + q
                    if q + 1 < cols:
                        u.append(x)
                        v.append(x + 1)
                    if r + 1 < rows:
                        u.append(x)
                        v.append(x + cols)
        else:
            raise ValueError(f"unknown generator {kind!r}; expected one of {GENERATORS}")
    except KeyError as exc:
        raise ValueError(f"{kind} is missing parameter {exc.args[0]!r}") from None
    u = np.asarray(u, dtype=np.int64)
    return EdgeStream(n, u, np.asarray(v, dtype=np.int64), np.ones(len(u), dtype=np.int64))


GENERATORS = ("gnp", "star", "clique_chain", "grid")
ORDERS = ("as_given", "random", "sorted_by_endpoint", "reversed")


def shuffle_stream(stream: EdgeStream, order: str = "as_given", seed: int = 0) -> EdgeStream:
    if order == "as_given":
        return stream
    if order == "reversed":
        perm = np.arange(stream.m)[::-1]
    elif order == "random":
        perm = np.random.default_rng(seed).permutation(stream.m)
    elif order == "sorted_by_endpoint":
        lo = np.minimum(stream.u, stream.v)
        hi = np.maximum(stream.u, stream.v)
        perm = np.lexsort((hi, lo))
    else:
        raise ValueError(f"unknown order {order!r}; expected one of {ORDERS}")
    return stream.take(perm)
