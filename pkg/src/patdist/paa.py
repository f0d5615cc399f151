"""Probabilistic arithmetic automata built from a DAA and a text model.

The PAA state space is the reachable part of DAA states x text contexts.
Emissions are deterministic (inherited from the DAA state) and every
operation is addition, so the state-value table is pushed forward with a
sparse matrix product followed by a per-state value shift.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from patdist.daa import DAA, build_cost_daa, check_same_alphabet, minimize_daa
from patdist.distribution import Distribution, TOLERANCE, empirical
from patdist.matchers import WindowAnalysis, run_matcher
from patdist.textmodel import TextModel, as_fraction

log = logging.getLogger(__name__)

EXACT_MAX_N = 20
EXACT_MAX_STATES = 200


class MassNotConserved(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class PAA:
    daa: DAA
    model: TextModel
    labels: tuple[tuple[int, int], ...]  # (daa state, context) per PAA state; 0 is the start
    transition: sp.csr_matrix  # T[i, j] = P(next state j | state i)
    emission: np.ndarray

    @property
    def n_states(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return self.n_states


def _context_table(model: TextModel) -> tuple[np.ndarray, np.ndarray]:
    """For deterministic-context models: successor context and probability per (c, a)."""
    k = len(model.alphabet)
    succ = np.full((model.n_contexts, k), -1, dtype=np.int64)
    prob = np.zeros((model.n_contexts, k))
    for tr in model.transitions:
        if tr.prob <= 0:
            continue
        succ[tr.source, tr.symbol] = tr.target
        prob[tr.source, tr.symbol] += tr.prob
    return succ, prob


def build_paa(daa: DAA, model: TextModel, general: bool | None = None) -> PAA:
    """Reachable product of ``daa`` with ``model``.

    ``T((q,c),(q',c')) = sum over a with delta(q,a)=q' of phi(c,a,c')``. When
    each (context, symbol) has a single successor context the inner sum over
    target contexts is skipped; ``general=True`` forces the full sum.
    """
    check_same_alphabet(daa.alphabet, model.alphabet)
    if general is None:
        general = not model.deterministic_context
    delta = daa.delta.tolist()
    k = len(daa.alphabet)
    if general:
        by_source = [model.successors(c) for c in range(model.n_contexts)]
    else:
        succ, prob = _context_table(model)
        succ_l, prob_l = succ.tolist(), prob.tolist()

    start = (0, model.start)
    index = {start: 0}
    labels = [start]
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    queue = deque([start])
    while queue:
        q, c = queue.popleft()
        i = index[(q, c)]
        out: dict[tuple[int, int], float] = {}
        if general:
            for tr in by_source[c]:
                if tr.prob > 0:
                    key = (delta[q][tr.symbol], tr.target)
                    out[key] = out.get(key, 0.0) + tr.prob
        else:
            for a in range(k):
                if succ_l[c][a] >= 0:
                    key = (delta[q][a], succ_l[c][a])
                    out[key] = out.get(key, 0.0) + prob_l[c][a]
        for key, p in out.items():
            j = index.get(key)
            if j is None:
                j = index[key] = len(labels)
                labels.append(key)
                queue.append(key)
            rows.append(i)
            cols.append(j)
            vals.append(p)
    n = len(labels)
    T = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    emission = daa.emission[[q for q, _ in labels]]
    return PAA(daa, model, tuple(labels), T, emission)


def cost_distribution(paa: PAA, n: int, exact: bool = False, **meta) -> Distribution:
    """Law of the accumulated value after reading ``n`` random symbols."""
    if n < 0:
        raise ValueError("text length must be >= 0")
    if exact:
        pmf = exact_cost_distribution(paa, n)
        return Distribution.from_mapping({v: float(p) for v, p in pmf.items()}, n=n, exact=True, **meta)
    offset, table = state_value_table(paa, n)
    return Distribution.from_array(table.sum(axis=0), offset, n=n, **meta)


def iter_distributions(paa: PAA, n: int, **meta) -> Iterator[Distribution]:
    """Value laws for t = 0, 1, ..., n from a single forward pass."""
    for t, (offset, table) in enumerate(push_steps(paa, n)):
        yield Distribution.from_array(table.sum(axis=0), offset, n=t, **meta)


def state_value_table(paa: PAA, n: int) -> tuple[int, np.ndarray]:
    """``f_n`` as ``(offset, F)`` with ``F[state, v - offset] = P(Q_n=state, V_n=v)``."""
    for table in push_steps(paa, n):
        pass
    return table


def push_steps(paa: PAA, n: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``f_0 .. f_n`` in the ``(offset, F)`` form of :func:`state_value_table`.

    Push form: mass at (q, v) flows to (q', v + emission[q']) with weight
    ``T[q, q']``. Only the current and next tables are kept.
    """
    emission = paa.emission
    e_lo = int(min(emission.min(), 0))
    e_hi = int(max(emission.max(), 0))
    groups = [(int(e), np.flatnonzero(emission == e)) for e in np.unique(emission)]
    Tt = paa.transition.T.tocsr()
    F = np.zeros((paa.n_states, 1))
    F[0, 0] = 1.0
    offset = 0
    yield offset, F
    for _ in range(n):
        G = Tt @ F
        width = F.shape[1]
        H = np.zeros((paa.n_states, width + e_hi - e_lo))
        for e, rows in groups:
            H[rows, e - e_lo : e - e_lo + width] = G[rows]
        mass = H.sum(axis=0)
        total = mass.sum()
        if abs(total - 1.0) > TOLERANCE:
            raise MassNotConserved(f"state-value table mass {total!r} after push step")
        nz = np.flatnonzero(mass)
        F = H[:, nz[0] : nz[-1] + 1]
        offset += e_lo + int(nz[0])
        yield offset, F


def exact_cost_distribution(paa: PAA, n: int) -> dict[int, Fraction]:
    """Rational-arithmetic push over sparse (state -> value -> mass) maps.

    Independent of the float path: transition weights are rebuilt from the
    DAA and model rather than read from ``paa.transition``.
    """
    if n > EXACT_MAX_N or paa.n_states > EXACT_MAX_STATES:
        raise ValueError(
            f"exact mode limited to n <= {EXACT_MAX_N} and <= {EXACT_MAX_STATES} PAA states"
        )
    index = {label: i for i, label in enumerate(paa.labels)}
    delta = paa.daa.delta
    rows: list[dict[int, Fraction]] = []
    for q, c in paa.labels:
        out: dict[int, Fraction] = {}
        for tr in paa.model.successors(c):
            if tr.prob > 0:
                j = index[(int(delta[q, tr.symbol]), tr.target)]
                out[j] = out.get(j, Fraction(0)) + as_fraction(tr.prob)
        rows.append(out)
    emission = [int(e) for e in paa.emission]
    f: dict[int, dict[int, Fraction]] = {0: {0: Fraction(1)}}
    for _ in range(n):
        g: dict[int, dict[int, Fraction]] = {}
        for q, values in f.items():
            for j, p in rows[q].items():
                target = g.setdefault(j, {})
                e = emission[j]
                for v, mass in values.items():
                    target[v + e] = target.get(v + e, Fraction(0)) + mass * p
        f = g
    marginal: dict[int, Fraction] = {}
    for values in f.values():
        for v, mass in values.items():
            marginal[v] = marginal.get(v, Fraction(0)) + mass
    # only meaningful when every row is exactly stochastic in rational arithmetic
    if all(sum(r.values()) == 1 for r in rows) and sum(marginal.values()) != 1:
        raise MassNotConserved("exact marginal does not sum to one")
    return dict(sorted(marginal.items()))


def kmp_distribution(n: int) -> Distribution:
    """Knuth-Morris-Pratt reads every text character exactly once."""
    if n < 0:
        raise ValueError("text length must be >= 0")
    return Distribution.dirac(n, algorithm="kmp", n=n)


def analysis_distribution(
    analysis: WindowAnalysis, model: TextModel, n: int, state_cap: int | None = None
) -> tuple[Distribution, dict[str, int]]:
    """Cost DAA -> minimize -> PAA -> distribution, with the state counts seen on the way."""
    daa = build_cost_daa(analysis, state_cap=state_cap)
    small = minimize_daa(daa)
    paa = build_paa(small, model)
    d = cost_distribution(
        paa, n, algorithm=analysis.algorithm, pattern=str(analysis.pattern),
        alphabet=analysis.alphabet.symbols,
    )
    sizes = {"daa_reachable": daa.n_states, "daa_minimized": small.n_states, "paa": paa.n_states}
    return d, sizes


@dataclass(frozen=True)
class MonteCarloResult:
    distribution: Distribution
    mean: float
    stderr: float
    samples: int


def monte_carlo_distribution(
    analysis: WindowAnalysis, model: TextModel, n: int, samples: int, seed: int = 0
) -> MonteCarloResult:
    """Empirical cost law from ``samples`` texts drawn from ``model``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    check_same_alphabet(analysis.alphabet, model.alphabet)
    rng = np.random.default_rng(seed)
    texts = model.sample(n, samples, rng)
    memo: dict[tuple[int, ...], tuple[int, int]] = {}

    def examine(w: Sequence[int]) -> tuple[int, int]:
        r = memo.get(w)
        if r is None:
            r = memo[w] = analysis.examine(w)
        return r

    cached = WindowAnalysis(analysis.pattern, analysis.algorithm, examine)
    costs = np.array([run_matcher(cached, row).cost for row in texts.tolist()], dtype=np.int64)
    mean = float(costs.mean())
    stderr = float(costs.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    d = empirical(
        costs, algorithm=analysis.algorithm, pattern=str(analysis.pattern), n=n,
        samples=samples, seed=seed, stderr=stderr,
    )
    return MonteCarloResult(d, mean, stderr, samples)
