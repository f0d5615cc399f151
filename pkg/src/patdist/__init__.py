"""Exact cost distributions of window-based pattern matching algorithms."""

from patdist.daa import DAA, build_cost_daa, daa_value, minimize_daa
from patdist.diffdaa import build_difference_daa, difference_distribution
from patdist.distribution import Distribution, distribution_stats
from patdist.matchers import (
    Algorithm,
    Alphabet,
    Pattern,
    WindowAnalysis,
    analysis_for,
    bdm_analysis,
    bom_analysis,
    build_factor_oracle,
    build_suffix_automaton,
    horspool_analysis,
    run_matcher,
)
from patdist.paa import (
    PAA,
    analysis_distribution,
    build_paa,
    cost_distribution,
    kmp_distribution,
    monte_carlo_distribution,
)
from patdist.textmodel import TextModel, iid_model, markov_model, string_probability, validate

__all__ = [
    "DAA", "PAA", "Algorithm", "Alphabet", "Distribution", "Pattern", "TextModel", "WindowAnalysis",
    "analysis_distribution", "analysis_for", "bdm_analysis", "bom_analysis", "build_cost_daa",
    "build_difference_daa", "build_factor_oracle", "build_paa", "build_suffix_automaton",
    "cost_distribution", "daa_value", "difference_distribution", "distribution_stats",
    "horspool_analysis", "iid_model", "kmp_distribution", "markov_model", "minimize_daa",
    "monte_carlo_distribution", "run_matcher", "string_probability", "validate",
]
