"""Difference DAAs: value on a string is cost_A(s) - cost_B(s)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from patdist.daa import DAA, build_cost_daa, check_same_alphabet, minimize_daa
from patdist.distribution import Distribution
from patdist.matchers import WindowAnalysis
from patdist.paa import build_paa, cost_distribution
from patdist.textmodel import TextModel


def build_difference_daa(first: DAA, second: DAA, minimize: bool = True) -> DAA:
    """Reachable product automaton emitting ``eta1(q1) - eta2(q2)``.

    Both inputs must be additive with start value 0 and nonnegative
    emissions. With ``minimize`` the components are minimized before the
    product and the product is minimized again.
    """
    check_same_alphabet(first.alphabet, second.alphabet)
    for d in (first, second):
        if d.signed or (d.n_states and d.emission.min() < 0):
            raise ValueError("difference DAA components need nonnegative emissions")
    if minimize:
        first, second = minimize_daa(first), minimize_daa(second)
    d1, d2 = first.delta.tolist(), second.delta.tolist()
    e1, e2 = first.emission.tolist(), second.emission.tolist()
    k = len(first.alphabet)
    index = {(0, 0): 0}
    labels = [(0, 0)]
    rows = []
    queue = deque([(0, 0)])
    while queue:
        q1, q2 = queue.popleft()
        row = []
        for a in range(k):
            key = (d1[q1][a], d2[q2][a])
            j = index.get(key)
            if j is None:
                j = index[key] = len(labels)
                labels.append(key)
                queue.append(key)
            row.append(j)
        rows.append(row)
    emission = [e1[q1] - e2[q2] for q1, q2 in labels]
    product = DAA(first.alphabet, np.array(rows, dtype=np.int64), np.array(emission, dtype=np.int64), signed=True)
    return minimize_daa(product) if minimize else product


@dataclass(frozen=True)
class DifferenceResult:
    distribution: Distribution
    less: float  # P(cost_A - cost_B < 0): A strictly cheaper
    equal: float
    greater: float
    sizes: dict[str, int]


def difference_distribution(
    first: WindowAnalysis,
    second: WindowAnalysis,
    model: TextModel,
    n: int,
    state_cap: int | None = None,
) -> DifferenceResult:
    """Exact law of ``cost_first - cost_second`` on random texts of length ``n``."""
    if first.pattern.symbols != second.pattern.symbols:
        raise ValueError("both analyses must be for the same pattern")
    check_same_alphabet(first.alphabet, second.alphabet)
    a = minimize_daa(build_cost_daa(first, state_cap=state_cap))
    b = minimize_daa(build_cost_daa(second, state_cap=state_cap))
    diff = build_difference_daa(a, b)
    paa = build_paa(diff, model)
    d = cost_distribution(
        paa,
        n,
        algorithm=first.algorithm,
        algorithm_b=second.algorithm,
        pattern=str(first.pattern),
        alphabet=first.alphabet.symbols,
    )
    less, equal, greater = d.sign_probabilities()
    d = d.with_meta(p_less=less, p_equal=equal, p_greater=greater)
    sizes = {
        "daa_a_minimized": a.n_states,
        "daa_b_minimized": b.n_states,
        "difference_minimized": diff.n_states,
        "paa": paa.n_states,
    }
    return DifferenceResult(d, less, equal, greater, sizes)
