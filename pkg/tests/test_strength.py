import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from refsparse import EdgeStream, WeightedGraph, cut_value, generate
from refsparse.strength import (
    StrengthLimitError,
    brute_strengths,
    exact_strengths,
    kweak_count,
    kweak_count_check,
    mincut,
    pair_strengths,
    strength_with_extra_edge,
    strong_components,
)

from conftest import FIXTURES, brute_components, k4, path, small_streams, triangle, triangle_bridge


def nx_mincut(g: WeightedGraph) -> float:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    for a, b, w in g.edges:
        if G.has_edge(a, b):
            G[a][b]["weight"] += w
        else:
            G.add_edge(a, b, weight=w)
    if not nx.is_connected(G):
        return 0.0
    return nx.stoer_wagner(G)[0]


def test_mincut_examples():
    assert mincut(k4()).value == 3
    r = mincut(triangle_bridge())
    assert r.value == 1 and r.side.side == frozenset({0, 1, 2})
    assert mincut(path(3)).value == 1
    with pytest.raises(ValueError):
        mincut(EdgeStream(1, [], [], []))


@given(small_streams(max_n=9, max_m=30, max_w=6))
def test_mincut_matches_networkx(s):
    g = s.to_graph()
    r = mincut(g)
    assert r.value == pytest.approx(nx_mincut(g))
    assert cut_value(g, r.side) == pytest.approx(r.value)
    assert 0 in r.side.side
    connected = len(set(brute_components(s.n, list(zip(s.u, s.v))))) == 1
    assert (r.value == 0) == (not connected)


def test_exact_strength_examples():
    assert list(exact_strengths(generate("star", n=5))) == [1] * 4
    assert list(exact_strengths(k4())) == [3] * 6
    B = triangle_bridge()
    s = exact_strengths(B)
    expect = [1 if (a, b) == (2, 3) else 2 for a, b, _ in B.edges]
    assert list(s) == expect


def test_brute_examples():
    assert list(brute_strengths(EdgeStream.from_edges(2, [(0, 1)]))) == [1]
    assert list(brute_strengths(triangle())) == [2, 2, 2]
    assert brute_strengths(triangle_bridge()) == exact_strengths(triangle_bridge())


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_exact_equals_brute(name):
    g = FIXTURES[name]()
    assert exact_strengths(g) == brute_strengths(g)


@given(small_streams(max_n=8, max_m=28, max_w=4))
def test_exact_equals_brute_weighted(s):
    assert exact_strengths(s) == brute_strengths(s)


def test_parallel_edges_count():
    g = EdgeStream.from_edges(3, [(0, 1), (0, 1), (0, 1), (1, 2)])
    assert list(exact_strengths(g)) == [3, 3, 3, 1]


def test_kweak_examples():
    tree = path(7)
    assert kweak_count_check(tree, 1)
    star = generate("star", n=5)
    assert kweak_count(exact_strengths(star), 2) == 4 and kweak_count_check(star, 2)
    assert kweak_count(exact_strengths(k4()), 2) == 0 and kweak_count_check(k4(), 2)


@given(small_streams(max_n=10, max_m=40))
def test_kweak_bound_every_k(s):
    st_ = exact_strengths(s)
    top = int(max(st_.values, default=1))
    for k in range(1, top + 2):
        assert kweak_count_check(s, k, st_)


@given(small_streams(max_n=10, max_m=40, max_w=3))
def test_strong_components_laminar(s):
    S = pair_strengths(s)
    top = int(S.max())
    prev = strong_components(S, 0)
    for k in range(1, top + 2):
        cur = strong_components(S, k)
        assert cur.refines(prev)
        prev = cur


@given(small_streams(max_n=9, max_m=25), st.data())
def test_strength_with_extra_edge_matches_recompute(s, data):
    a = data.draw(st.integers(0, s.n - 1))
    b = data.draw(st.integers(0, s.n - 2))
    b += b >= a
    g = s.to_graph()
    A = g.adjacency()
    S = pair_strengths(g)
    got = strength_with_extra_edge(A, S, a, b)
    assert np.array_equal(A, g.adjacency())   # scratch edit undone
    plus = EdgeStream(s.n, list(s.u) + [a], list(s.v) + [b], list(s.w) + [1])
    assert got == exact_strengths(plus).values[-1]


def test_strengths_bounded_by_total_weight():
    g = generate("gnp", seed=3, n=40, p=0.3)
    s = exact_strengths(g).values
    assert np.all(s >= 1) and np.all(s <= g.m)


def test_size_limits():
    big = generate("star", n=13)
    with pytest.raises(StrengthLimitError):
        brute_strengths(big)
    with pytest.raises(StrengthLimitError):
        exact_strengths(generate("star", n=30), max_n=20)
