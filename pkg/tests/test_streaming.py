import numpy as np
import pytest
from hypothesis import given, strategies as st

from refsparse import EdgeStream, RefineParams, generate
from refsparse.connectivity import CoinOracle, UnionFind
from refsparse.refinement import refinement_sample
from refsparse.streaming import (
    OnePassState,
    expand_weighted_edge,
    extract_certificate,
    multipass_sparsify,
    onepass_process_edge,
    onepass_sparsify,
    weighted_insert_prob,
)
from refsparse.verify import verify_sparsifier

from conftest import small_streams


def insert_p(l, w):
    return 1.0 - (1.0 - 2.0 ** -l) ** w


def reference_onepass(stream, params):
    """Cell-by-cell transcription with one UnionFind per cell."""
    L, K = params.L, params.K
    coins = CoinOracle(params.seed)
    cells = [UnionFind(stream.n) for _ in range(L * K)]

    def conn(J, a, b):
        return True if J == 0 else cells[J - 1].connected(a, b)

    jstar, levels = [], []
    for t, (a, b, w) in enumerate(stream.edges):
        J = 1
        while J <= L * K and conn(J, a, b):
            J += 1
        jstar.append(J)
        while J <= L * K:
            l, k = (J - 1) // K + 1, (J - 1) % K + 1
            if coins.coin(t, l, k, "geom") >= insert_p(l, w):
                break
            cells[J - 1].union(a, b)
            J += 1
        lv = L + 1
        for l in range(1, L + 1):
            if not conn(K * (l - 1) + K, a, b):
                lv = l
                break
        levels.append(lv)
    return np.array(jstar), np.array(levels)


def reference_multipass_levels(stream, params):
    L, K = params.L, params.K
    coins = CoinOracle(params.seed)
    grid = {(l, k): UnionFind(stream.n) for l in range(1, L + 1) for k in range(1, K + 1)}

    def conn(l, k, a, b):
        return True if k == 0 else grid[(l, k)].connected(a, b)

    for k in range(1, K + 1):
        for t, (a, b, w) in enumerate(stream.edges):
            for l in range(1, L + 1):
                ratio = insert_p(l, w) / (insert_p(l - 1, w) if l > 1 else 1.0)
                if coins.coin(t, l, k, "fair") >= ratio:
                    break
                if conn(l, k - 1, a, b):
                    grid[(l, k)].union(a, b)
    out = []
    for a, b, _ in stream.edges:
        out.append(next((l for l in range(1, L + 1) if not conn(l, K, a, b)), L + 1))
    return np.array(out)


@given(small_streams(max_n=8, max_m=30, max_w=3), st.integers(0, 2**40))
def test_onepass_matches_reference(s, seed):
    p = RefineParams.for_stream(s, seed=seed, L=3, K=3, rho_scale=1e-3)
    sample, state = onepass_sparsify(s, p)
    js, lv = reference_onepass(s, p)
    assert np.array_equal(state.jstar, js)
    assert np.array_equal(state.levels, lv)
    assert state.ladder.chain_violations() == 0


@given(small_streams(max_n=8, max_m=30, max_w=3), st.integers(0, 2**40))
def test_multipass_matches_reference(s, seed):
    p = RefineParams.for_stream(s, seed=seed, L=3, K=3, rho_scale=1e-3)
    sample, ladder = multipass_sparsify(s, p, return_ladder=True)
    assert np.array_equal(sample.input_probs, p.level_prob(reference_multipass_levels(s, p)))
    assert ladder.grid_violations() == 0


def test_onepass_examples():
    s = EdgeStream.from_edges(3, [(0, 1)])
    for seed in range(100):
        if CoinOracle(seed).coin(0, 1, 1, "geom") >= 0.5:
            p = RefineParams(3, seed=seed)
            _, st_ = onepass_sparsify(s, p)
            assert st_.jstar[0] == 1 and st_.levels[0] == 1
            assert st_.sparsifier().input_probs[0] == min(1, p.phi / (2 * p.eps ** 2))
            break
    else:
        pytest.fail("no tails coin")


def test_duplicate_edge_fallback():
    # once (0,1) is connected in every cell, a repeat needs no insertion
    p = RefineParams(2, L=2, K=2, rho_scale=1e-6)
    state = OnePassState(2, p)
    for J in range(1, 5):
        state.ladder.insert(J, 0, 1)
    part = state.feed([0], [1], [1])
    assert state.levels[0] == p.L + 1 and state.jstar[0] == p.L * p.K + 1
    assert part.m == 1 and part.graph.w[0] == 1.0


def test_saturation_n32():
    g = generate("gnp", seed=3, n=32, p=0.3)
    sample, _ = onepass_sparsify(g, RefineParams.for_stream(g, eps=0.5))
    assert sample.graph.canonical() == g.to_graph().canonical()


def test_empty_and_determinism():
    e = EdgeStream(5, [], [], [])
    assert onepass_sparsify(e)[0].m == 0
    g = generate("gnp", seed=2, n=50, p=0.2)
    p = RefineParams.for_stream(g, seed=5, rho_scale=1e-3)
    assert onepass_sparsify(g, p)[0] == onepass_sparsify(g, p)[0]


def test_process_edge_incrementally_equals_batch():
    g = generate("gnp", seed=2, n=40, p=0.2)
    p = RefineParams.for_stream(g, seed=1, rho_scale=1e-3)
    batch, _ = onepass_sparsify(g, p)
    state = OnePassState(g.n, p)
    out = [onepass_process_edge(state, e) for e in g.edges]
    kept = [o for o in out if o is not None]
    assert len(kept) == batch.m
    assert np.allclose([w for *_, w in kept], batch.graph.w)


def test_weights_equal_inverse_probability():
    g = generate("gnp", seed=4, n=60, p=0.2)
    sample, _ = onepass_sparsify(g, RefineParams.for_stream(g, rho_scale=1e-3))
    assert np.allclose(sample.graph.w, 1 / sample.prob)
    assert np.all((sample.prob > 0) & (sample.prob <= 1))


def test_coupling_single_run():
    g = generate("gnp", seed=0, n=64, p=0.3)
    p = RefineParams.for_stream(g, seed=12, rho_scale=1e-3)
    _, lv = refinement_sample(g, p, role="geom")
    _, state = onepass_sparsify(g, p)
    assert np.all(lv >= state.levels)


def test_coin_flips_per_edge_small():
    flips = []
    for seed in range(20):
        g = generate("gnp", seed=seed, n=1024, p=0.02)
        _, state = onepass_sparsify(g, RefineParams.for_stream(g, seed=seed))
        flips.append(state.coin_flips / g.m)
        assert state.coin_flips <= g.m + state.ladder.cell_inserts.sum()
    assert np.mean(flips) <= 3


def test_multipass_requires_replayable():
    with pytest.raises(TypeError):
        multipass_sparsify(iter([(0, 1)]))


def test_multipass_cut_quality_saturated():
    for seed in range(5):
        g = generate("gnp", seed=seed, n=64, p=0.3)
        s = multipass_sparsify(g, RefineParams.for_stream(g, seed=seed))
        assert s.m <= g.m
        assert verify_sparsifier(g, s, 0.5, "random:200", seed).passed


def test_certificate_examples(B):
    hits = 0
    for seed in range(100):
        _, state = onepass_sparsify(B, RefineParams.for_stream(B, seed=seed))
        cert = extract_certificate(state, 1)
        hits += any((B.u[i], B.v[i]) == (2, 3) for i in cert)
    assert hits >= 95
    with pytest.raises(ValueError):
        extract_certificate(state, 0)


def test_certificate_empty_when_merged():
    g = generate("gnp", seed=0, n=10, p=1.0)
    p = RefineParams.for_stream(g)
    state = OnePassState(g.n, p)
    for J in range(1, p.K + 1):
        for x in range(1, g.n):
            state.ladder.insert(J, 0, x)
    state.finalize(g)
    assert len(extract_certificate(state, 1)) == 0


def test_weighted_expansion():
    c = CoinOracle(0)
    assert weighted_insert_prob(1, 3) == 2.0 ** -3
    assert weighted_insert_prob(2, 1) == pytest.approx(0.75)
    assert weighted_insert_prob(10 ** 6, 2) == pytest.approx(1.0)
    u = c.coin(5, 1, 1, "geom")
    assert expand_weighted_edge(1, 1, 1, c, edge_index=5) == (u < 0.5)
    with pytest.raises(ValueError):
        expand_weighted_edge(100, 1, 1, c, cap=50)
    freq = np.mean([expand_weighted_edge(2, 1, 1, c, edge_index=i) for i in range(20000)])
    assert abs(freq - 0.75) < 0.015


def test_weight_cap():
    with pytest.raises(ValueError):
        onepass_sparsify(EdgeStream.from_edges(2, [(0, 1, 17)]))


def test_weighted_stream_unbiased():
    g = EdgeStream.from_edges(6, [(i, (i + 1) % 6, 1 + i) for i in range(6)])
    tot = [onepass_sparsify(g, RefineParams.for_stream(g, seed=s, rho_scale=2e-3))[0].total_weight
           for s in range(400)]
    assert abs(np.mean(tot) - g.w.sum()) < 4 * np.std(tot) / 20


def test_weak_count_counter():
    g = generate("gnp", seed=0, n=128, p=0.1)
    _, state = onepass_sparsify(g, RefineParams.for_stream(g))
    wc = state.weak_counts()
    js = state.jstar
    # |E \ X^J| counts edges whose endpoints were apart in D_{J-1}; D_0 joins everything
    assert wc[0] == 0
    for J in range(1, len(wc) + 1):
        assert wc[J - 1] == np.count_nonzero(js < J)
    assert np.all(np.diff(wc) >= 0)
