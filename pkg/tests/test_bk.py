import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from refsparse import CutSpec, RefineParams, WeightedGraph, cut_value, generate
from refsparse.bk import (
    SampleProbabilities,
    bk_sample,
    oversample,
    shrink_pipeline,
    theory_probabilities,
)
from refsparse.streaming import onepass_sparsify
from refsparse.strength import exact_strengths
from refsparse.verify import calibrate_rho_scale, verify_sparsifier


def test_theory_probability_example():
    p = theory_probabilities([1000.0], n=100, eps=0.5, d=1).probs[0]
    assert 16 * 3 * math.log(100) == pytest.approx(221.04, abs=0.01)
    assert p == pytest.approx(0.884, abs=5e-4)


@given(st.lists(st.floats(1, 1e6), min_size=1, max_size=30), st.floats(1e-4, 1))
def test_monotone_clamp(s, scale):
    s = np.sort(np.array(s))
    p = theory_probabilities(s, 50, 0.5, 1, scale)
    assert np.all(np.diff(p.probs) <= 1e-15)
    rho = 16 * 3 * math.log(50) * scale
    assert np.all(p.probs[s <= rho / 0.25] == 1.0)


def test_saturation_is_identity():
    g = generate("gnp", seed=0, n=64, p=0.3)
    out = bk_sample(g)
    assert out.graph.canonical() == g.to_graph().canonical()


def test_missing_strength():
    g = generate("gnp", seed=0, n=10, p=0.5)
    with pytest.raises(ValueError):
        bk_sample(g, strengths=[1.0] * (g.m - 1))


def test_oversample_contract():
    g = generate("gnp", seed=1, n=40, p=0.3)
    s = exact_strengths(g)
    base = theory_probabilities(s, g.n, 0.5, 1, 1e-3).probs
    same = oversample(g, base, seed=4)
    assert same == bk_sample(g, s, 0.5, 1, 1e-3, seed=4)
    ones = oversample(g, np.ones(g.m))
    assert ones.graph.canonical() == g.to_graph().canonical()
    with pytest.raises(ValueError, match="contract"):
        oversample(g, base * 0.9, strengths=s, rho_scale=1e-3)
    oversample(g, np.minimum(1, base * 1.5), strengths=s, rho_scale=1e-3)
    for bad in (np.zeros(g.m), np.full(g.m, 1.2)):
        with pytest.raises(ValueError):
            SampleProbabilities(bad)


def test_unbiased_fixed_cut_and_expected_size():
    g = generate("gnp", seed=2, n=60, p=0.2)
    s = exact_strengths(g)
    probs = theory_probabilities(s, g.n, 0.5, 1, 2e-3)
    assert 0.05 < probs.probs.mean() < 0.95
    side = CutSpec(set(range(20)))
    true = cut_value(g, side)
    vals, sizes = [], []
    for seed in range(500):
        out = bk_sample(g, s, 0.5, 1, 2e-3, seed=seed)
        vals.append(cut_value(out.graph, side))
        sizes.append(out.m)
    se = np.std(vals) / math.sqrt(len(vals))
    assert abs(np.mean(vals) - true) <= 3 * se
    assert abs(np.mean(sizes) - probs.expected_size()) <= 0.1 * probs.expected_size()


def test_weighted_edges_keep_exact_weight_when_saturated():
    g = WeightedGraph(3, [0, 1], [1, 2], [2.5, 1 / 3])
    out = bk_sample(g, [1.0, 1.0])
    assert np.array_equal(out.graph.w, g.w)


def test_weighted_unbiased():
    g = WeightedGraph(4, [0, 1, 2, 0], [1, 2, 3, 3], [3.7, 0.4, 12.0, 1.0])
    tot = [bk_sample(g, [40.0] * 4, rho_scale=2e-3, seed=s).total_weight for s in range(2000)]
    assert abs(np.mean(tot) - g.total_weight) <= 4 * np.std(tot) / math.sqrt(2000)


def test_shrink_identity_when_saturated():
    g = generate("gnp", seed=3, n=30, p=0.3)
    sample, _ = onepass_sparsify(g)
    shrunk = shrink_pipeline(sample)
    assert shrunk.graph.canonical() == g.to_graph().canonical()
    assert np.array_equal(np.sort(shrunk.edge_index), np.arange(g.m))


def test_shrink_never_adds_edges():
    g = generate("gnp", seed=4, n=128, p=0.2)
    scale = calibrate_rho_scale(g, 0.5)
    sample, _ = onepass_sparsify(g, RefineParams.for_stream(g, rho_scale=scale))
    shrunk = shrink_pipeline(sample, rho_scale=scale)
    assert shrunk.m <= sample.m
    assert set(shrunk.edge_index) <= set(sample.edge_index)


def test_shrink_end_to_end_cut_check_default_rho():
    ok = 0
    for seed in range(100):
        g = generate("gnp", seed=seed, n=14, p=0.4)
        sample, _ = onepass_sparsify(g, RefineParams.for_stream(g, seed=seed))
        ok += verify_sparsifier(g, shrink_pipeline(sample, seed=seed), 0.5).passed
    assert ok >= 90


def test_shrink_weight_cap():
    g = WeightedGraph(2, [0], [1], [17.0])
    with pytest.raises(ValueError, match="cap"):
        shrink_pipeline(g)
