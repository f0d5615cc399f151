"""Brute-force checks of the DAA/PAA pipeline against exhaustive text enumeration."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from patdist.daa import build_cost_daa, minimize_daa
from patdist.diffdaa import build_difference_daa
from patdist.matchers import (
    Algorithm,
    Alphabet,
    MatchResult,
    Pattern,
    WindowAnalysis,
    analysis_for,
    reference_search,
)
from patdist.paa import build_paa, iter_distributions
from patdist.textmodel import TextModel, iid_model, markov_model, string_probability

ENUMERATION_LIMIT = 10**7
TOLERANCE = 1e-9

Reference = Callable[[Sequence[int]], MatchResult]


@dataclass
class Counterexample:
    algorithm: str
    pattern: str
    model: str
    n: int
    value: int
    expected: float
    got: float

    def __str__(self) -> str:
        return (
            f"{self.algorithm} pattern={self.pattern} model={self.model} n={self.n} "
            f"value={self.value}: expected {self.expected!r}, got {self.got!r}"
        )


@dataclass
class VerifyReport:
    checks: int = 0
    max_deviation: float = 0.0
    failures: list[Counterexample] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "VerifyReport") -> None:
        self.checks += other.checks
        self.max_deviation = max(self.max_deviation, other.max_deviation)
        self.failures.extend(other.failures)


def default_markov(alphabet: Alphabet) -> TextModel:
    """A fixed, deliberately non-uniform order-1 model for any alphabet.

    Over ``AC`` this is ``pi(A)=0.5``, ``P(A|A)=0.9``, ``P(A|C)=0.2``.
    """
    syms = alphabet.symbols
    k = len(syms)
    if k == 2:
        a, c = syms
        probs = {"": {a: 0.5, c: 0.5}, a: {a: 0.9, c: 0.1}, c: {a: 0.2, c: 0.8}}
        return markov_model(alphabet, 1, probs)
    probs = {"": {s: 1.0 / k for s in syms}}
    for i, prev in enumerate(syms):
        weights = [1 + (i + j) % k for j in range(k)]
        total = sum(weights)
        probs[prev] = {s: w / total for s, w in zip(syms, weights)}
    return markov_model(alphabet, 1, probs)


def enumerate_texts(alphabet: Alphabet, n: int) -> Iterable[tuple[int, ...]]:
    if len(alphabet) ** n > ENUMERATION_LIMIT:
        raise ValueError(f"|alphabet|^n = {len(alphabet) ** n} exceeds enumeration limit")
    return itertools.product(range(len(alphabet)), repeat=n)


@functools.lru_cache(maxsize=64)
def text_probabilities(model: TextModel, n: int) -> tuple[tuple[tuple[int, ...], float], ...]:
    """Every text of length n with positive probability, with that probability."""
    out = []
    for s in enumerate_texts(model.alphabet, n):
        p = string_probability(model, s)
        if p > 0:
            out.append((s, p))
    return tuple(out)


def brute_force_pmf(
    cost: Callable[[Sequence[int]], int], model: TextModel, n: int
) -> dict[int, float]:
    pmf: dict[int, float] = {}
    for s, p in text_probabilities(model, n):
        v = cost(s)
        pmf[v] = pmf.get(v, 0.0) + p
    return pmf


def _compare(
    label: tuple[str, str, str], got: dict[int, float], expected: dict[int, float], n: int, report: VerifyReport
) -> None:
    report.checks += 1
    worst = None
    for v in sorted(set(got) | set(expected)):
        dev = abs(got.get(v, 0.0) - expected.get(v, 0.0))
        report.max_deviation = max(report.max_deviation, dev)
        if dev > TOLERANCE and worst is None:
            worst = Counterexample(*label, n, v, expected.get(v, 0.0), got.get(v, 0.0))
    if worst is not None:
        report.failures.append(worst)


def verify_analysis(
    analysis: WindowAnalysis,
    model: TextModel,
    max_n: int,
    reference: Reference | None = None,
    model_name: str = "model",
) -> VerifyReport:
    """PAA cost laws for n = 0..max_n against enumeration of ``reference`` costs.

    ``reference`` defaults to the textbook matcher for the analysis' algorithm,
    which does not use the analysis' cost/shift functions.
    """
    if reference is None:
        algo = Algorithm.parse(analysis.algorithm)
        pattern = analysis.pattern
        reference = lambda s: reference_search(algo, s, pattern)  # noqa: E731
    paa = build_paa(minimize_daa(build_cost_daa(analysis)), model)
    report = VerifyReport()
    label = (analysis.algorithm, str(analysis.pattern), model_name)
    for n, d in enumerate(iter_distributions(paa, max_n)):
        expected = brute_force_pmf(lambda s: reference(s).cost, model, n)
        _compare(label, d.as_dict(), expected, n, report)
    return report


def verify_difference(
    first: WindowAnalysis, second: WindowAnalysis, model: TextModel, max_n: int, model_name: str = "model"
) -> VerifyReport:
    """Difference DAA values and laws against per-text cost differences."""
    a = build_cost_daa(first)
    b = build_cost_daa(second)
    diff = build_difference_daa(a, b)
    alg_a = Algorithm.parse(first.algorithm)
    alg_b = Algorithm.parse(second.algorithm)
    pattern = first.pattern

    def cost_diff(s: Sequence[int]) -> int:
        return reference_search(alg_a, s, pattern).cost - reference_search(alg_b, s, pattern).cost

    report = VerifyReport()
    label = (f"{first.algorithm}-{second.algorithm}", str(pattern), model_name)
    for n in range(max_n + 1):
        for s in enumerate_texts(first.alphabet, n):
            report.checks += 1
            got, want = diff.value(s), cost_diff(s)
            if got != want:
                report.failures.append(Counterexample(*label, n, want, float(want), float(got)))
                return report
    paa = build_paa(diff, model)
    for n, d in enumerate(iter_distributions(paa, max_n)):
        _compare(label, d.as_dict(), brute_force_pmf(cost_diff, model, n), n, report)
    return report


def all_patterns(alphabet: Alphabet, max_m: int) -> list[Pattern]:
    return [
        Pattern(p, alphabet)
        for m in range(1, max_m + 1)
        for p in itertools.product(range(len(alphabet)), repeat=m)
    ]


def verify_all(
    alphabet: Alphabet,
    max_m: int,
    max_n: int,
    difference: bool = False,
    algorithms: Sequence[Algorithm] = tuple(Algorithm),
) -> VerifyReport:
    models = {"iid-uniform": iid_model(alphabet), "markov1": default_markov(alphabet)}
    report = VerifyReport()
    for pattern in all_patterns(alphabet, max_m):
        analyses = {algo: analysis_for(algo, pattern) for algo in algorithms}
        for name, model in models.items():
            if difference:
                for x, y in itertools.permutations(algorithms, 2):
                    report.merge(verify_difference(analyses[x], analyses[y], model, max_n, name))
            else:
                for analysis in analyses.values():
                    report.merge(verify_analysis(analysis, model, max_n, model_name=name))
    return report
