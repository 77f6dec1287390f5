"""Refinement sampling for cut-preserving graph sparsification."""

from .bk import SampleProbabilities, bk_sample, oversample, shrink_pipeline
from .connectivity import CoinOracle, RefinementLadder, UnionFind
from .graph import (
    CutSpec,
    Edge,
    EdgeStream,
    ParseError,
    WeightedGraph,
    cut_value,
    generate,
    parse_edge_stream,
    parse_weighted_graph,
    shuffle_stream,
)
from .params import RefineParams
from .refinement import Partition, refine, refinement_sample
from .runner import run_algorithm
from .sparsifier import Sparsifier
from .streaming import OnePassState, extract_certificate, multipass_sparsify, onepass_sparsify
from .strength import StrengthMap, brute_strengths, exact_strengths, kweak_count_check, mincut
from .twopass import TwoPassParams, pass_one, truncated_strength_estimate, twopass_sparsify
from .verify import (
    QualityReport,
    component_shrink_check,
    size_scaling_report,
    verify_certificate,
    verify_sparsifier,
)

__version__ = "0.1.0"

__all__ = [
    "CoinOracle",
    "CutSpec",
    "Edge",
    "EdgeStream",
    "OnePassState",
    "ParseError",
    "Partition",
    "QualityReport",
    "RefineParams",
    "RefinementLadder",
    "SampleProbabilities",
    "Sparsifier",
    "StrengthMap",
    "TwoPassParams",
    "UnionFind",
    "WeightedGraph",
    "bk_sample",
    "brute_strengths",
    "component_shrink_check",
    "cut_value",
    "exact_strengths",
    "extract_certificate",
    "generate",
    "kweak_count_check",
    "mincut",
    "multipass_sparsify",
    "onepass_sparsify",
    "oversample",
    "parse_edge_stream",
    "parse_weighted_graph",
    "pass_one",
    "refine",
    "refinement_sample",
    "run_algorithm",
    "shrink_pipeline",
    "shuffle_stream",
    "size_scaling_report",
    "truncated_strength_estimate",
    "twopass_sparsify",
    "verify_certificate",
    "verify_sparsifier",
]
