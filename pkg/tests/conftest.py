import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from refsparse import EdgeStream, generate

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def triangle_bridge() -> EdgeStream:
    return generate("clique_chain", c=2, s=3)


def k4() -> EdgeStream:
    return generate("gnp", n=4, p=1.0)


def path(n: int) -> EdgeStream:
    return EdgeStream.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def triangle() -> EdgeStream:
    return EdgeStream.from_edges(3, [(0, 1), (1, 2), (0, 2)])


FIXTURES = {
    "star5": lambda: generate("star", n=5),
    "K4": k4,
    "B": triangle_bridge,
    "path6": lambda: path(6),
}


@pytest.fixture
def B():
    return triangle_bridge()


@st.composite
def small_streams(draw, max_n=9, max_m=24, max_w=1):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(0, max_m))
    edges = []
    for _ in range(m):
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(0, n - 2))
        if b >= a:
            b += 1
        edges.append((a, b, draw(st.integers(1, max_w))))
    return EdgeStream.from_edges(n, edges)


def brute_components(n, edges):
    """Component labels by repeated relabelling (no union-find)."""
    lab = list(range(n))
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            lo = min(lab[a], lab[b])
            for x in (a, b):
                if lab[x] != lo:
                    lab[x] = lo
                    changed = True
    return np.array(lab)


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
