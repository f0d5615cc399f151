"""Finite-memory random text models ``(C, c0, alphabet, phi)``.

``phi(c, a, c')`` is the probability of moving from context ``c`` to ``c'``
while emitting symbol ``a``. i.i.d. and order-r Markov models are special
cases with at most one successor context per ``(c, a)``.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from patdist.matchers import Alphabet

log = logging.getLogger(__name__)

TOLERANCE = 1e-9


class SumNotOneError(ValueError):
    """Outgoing probabilities of a context do not sum to one."""

    def __init__(self, context: str, total: float):
        self.context = context
        self.total = total
        super().__init__(f"SUM_NOT_ONE: context {context!r} sums to {total!r}")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    source: int
    symbol: int
    target: int
    prob: float


@dataclass(frozen=True)
class Diagnostics:
    residuals: dict[str, float] = field(default_factory=dict)  # context -> 1 - outgoing mass
    unreachable: list[str] = field(default_factory=list)
    out_of_range: list[tuple[str, str, str, float]] = field(default_factory=list)
    dead: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.residuals or self.out_of_range or self.dead)

    def messages(self) -> list[str]:
        msgs = [f"context {c!r}: outgoing mass off by {r:.3g}" for c, r in self.residuals.items()]
        msgs += [f"context {c!r} has no outgoing transitions" for c in self.dead]
        msgs += [f"transition {s!r} -{a}-> {t!r} has probability {p!r}" for s, a, t, p in self.out_of_range]
        msgs += [f"warning: context {c!r} unreachable from start" for c in self.unreachable]
        return msgs


@dataclass(frozen=True, eq=False)
class TextModel:
    alphabet: Alphabet
    contexts: tuple[str, ...]
    start: int
    transitions: tuple[Transition, ...]

    @property
    def n_contexts(self) -> int:
        return len(self.contexts)

    def __post_init__(self) -> None:
        by_source: list[list[Transition]] = [[] for _ in self.contexts]
        for tr in self.transitions:
            by_source[tr.source].append(tr)
        object.__setattr__(self, "_by_source", by_source)

    def successors(self, context: int) -> list[Transition]:
        return self._by_source[context]

    @property
    def deterministic_context(self) -> bool:
        """At most one successor context for every (context, symbol)."""
        seen: dict[tuple[int, int], int] = {}
        for tr in self.transitions:
            if tr.prob <= 0:
                continue
            prev = seen.setdefault((tr.source, tr.symbol), tr.target)
            if prev != tr.target:
                return False
        return True

    def phi(self, source: int, symbol: int, target: int) -> float:
        return sum(
            tr.prob for tr in self._by_source[source] if tr.symbol == symbol and tr.target == target
        )

    # forward recurrence --------------------------------------------------

    def initial_forward(self) -> np.ndarray:
        f = np.zeros(self.n_contexts)
        f[self.start] = 1.0
        return f

    def forward_step(self, f: np.ndarray, symbol: int) -> np.ndarray:
        """``P(s a, C=c) = sum_c' P(s, C=c') phi(c', a, c)``."""
        out = np.zeros_like(f)
        for tr in self.transitions:
            if tr.symbol == symbol and f[tr.source] != 0.0:
                out[tr.target] += f[tr.source] * tr.prob
        return out

    def sample(self, n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``samples`` texts of length ``n``; returns an int array (samples, n)."""
        texts = np.zeros((samples, n), dtype=np.int64)
        ctx = np.full(samples, self.start, dtype=np.int64)
        tables = []
        for c in range(self.n_contexts):
            trs = [tr for tr in self._by_source[c] if tr.prob > 0]
            cum = np.cumsum([tr.prob for tr in trs])
            if len(cum):
                cum /= cum[-1]
            tables.append(
                (
                    cum,
                    np.array([tr.symbol for tr in trs], dtype=np.int64),
                    np.array([tr.target for tr in trs], dtype=np.int64),
                )
            )
        for t in range(n):
            u = rng.random(samples)
            new_ctx = np.empty_like(ctx)
            for c, (cum, syms, targets) in enumerate(tables):
                sel = ctx == c
                if not sel.any():
                    continue
                j = np.minimum(np.searchsorted(cum, u[sel], side="right"), len(cum) - 1)
                texts[sel, t] = syms[j]
                new_ctx[sel] = targets[j]
            ctx = new_ctx
        return texts

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        syms = self.alphabet.symbols
        return {
            "alphabet": syms,
            "contexts": list(self.contexts),
            "start": self.contexts[self.start],
            "transitions": [
                {
                    "from": self.contexts[tr.source],
                    "symbol": syms[tr.symbol],
                    "to": self.contexts[tr.target],
                    "prob": tr.prob,
                }
                for tr in self.transitions
            ],
        }


def validate(model: TextModel) -> Diagnostics:
    """Check stochasticity, probability ranges and reachability; never raises."""
    names = model.contexts
    syms = model.alphabet.symbols
    totals = [0.0] * model.n_contexts
    out_of_range = []
    for tr in model.transitions:
        if not (0.0 <= tr.prob <= 1.0) or math.isnan(tr.prob):
            out_of_range.append((names[tr.source], syms[tr.symbol], names[tr.target], tr.prob))
        totals[tr.source] += tr.prob
    residuals = {}
    dead = []
    for c, total in enumerate(totals):
        if total == 0.0:
            dead.append(names[c])
        elif abs(total - 1.0) > TOLERANCE:
            residuals[names[c]] = 1.0 - total
    reach = _reachable_contexts(model.n_contexts, model.start, model.transitions)
    unreachable = [names[c] for c in range(model.n_contexts) if c not in reach]
    return Diagnostics(residuals, unreachable, out_of_range, dead)


def _reachable_contexts(n: int, start: int, transitions: Sequence[Transition]) -> set[int]:
    adj: list[set[int]] = [set() for _ in range(n)]
    for tr in transitions:
        if tr.prob > 0:
            adj[tr.source].add(tr.target)
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        for d in adj[c]:
            if d not in seen:
                seen.add(d)
                stack.append(d)
    return seen


def make_model(
    alphabet: Alphabet | str,
    contexts: Sequence[str],
    start: str,
    transitions: Sequence[tuple[str, str, str, float]],
) -> TextModel:
    """Build and validate a general model from named contexts and symbols.

    Raises on normalization or range errors; contexts unreachable from the
    start are pruned with a warning.
    """
    if isinstance(alphabet, str):
        alphabet = Alphabet(alphabet)
    names = tuple(contexts)
    if len(set(names)) != len(names):
        raise ModelError("duplicate context names")
    idx = {c: i for i, c in enumerate(names)}
    if start not in idx:
        raise ModelError(f"start context {start!r} not declared")
    trs = []
    for src, sym, dst, prob in transitions:
        if src not in idx or dst not in idx:
            raise ModelError(f"transition {src!r} -> {dst!r} uses an undeclared context")
        if sym not in alphabet.index:
            raise ModelError(f"symbol {sym!r} not in alphabet {alphabet.symbols!r}")
        trs.append(Transition(idx[src], alphabet.index[sym], idx[dst], float(prob)))
    model = TextModel(alphabet, names, idx[start], tuple(trs))
    diag = validate(model)
    if diag.out_of_range:
        raise ModelError("; ".join(diag.messages()))
    if diag.unreachable:
        log.warning("pruning contexts unreachable from %r: %s", start, ", ".join(diag.unreachable))
        model = _prune(model)
        diag = validate(model)
    if diag.dead:
        raise ModelError(f"contexts without outgoing transitions: {', '.join(diag.dead)}")
    if diag.residuals:
        ctx, res = next(iter(diag.residuals.items()))
        raise SumNotOneError(ctx, 1.0 - res)
    return model


def _prune(model: TextModel) -> TextModel:
    keep = sorted(_reachable_contexts(model.n_contexts, model.start, model.transitions))
    remap = {c: i for i, c in enumerate(keep)}
    trs = tuple(
        Transition(remap[tr.source], tr.symbol, remap[tr.target], tr.prob)
        for tr in model.transitions
        if tr.source in remap and tr.target in remap
    )
    return TextModel(model.alphabet, tuple(model.contexts[c] for c in keep), remap[model.start], trs)


def _check_distribution(context: str, probs: Mapping[str, float], alphabet: Alphabet) -> None:
    for sym in probs:
        if sym not in alphabet.index:
            raise ModelError(f"symbol {sym!r} not in alphabet {alphabet.symbols!r}")
    total = math.fsum(probs.values())
    if abs(total - 1.0) > TOLERANCE:
        raise SumNotOneError(context, total)


def iid_model(alphabet: Alphabet | str, probs: Mapping[str, float] | Sequence[float] | None = None) -> TextModel:
    """Single empty context; ``probs=None`` means uniform."""
    if isinstance(alphabet, str):
        alphabet = Alphabet(alphabet)
    if probs is None:
        probs = {c: 1.0 / len(alphabet) for c in alphabet.symbols}
    elif not isinstance(probs, Mapping):
        if len(probs) != len(alphabet):
            raise ModelError("need one probability per symbol")
        probs = dict(zip(alphabet.symbols, probs))
    _check_distribution("", probs, alphabet)
    return make_model(alphabet, [""], "", [("", a, "", p) for a, p in probs.items() if p > 0])


def markov_model(
    alphabet: Alphabet | str, order: int, probs: Mapping[str, Mapping[str, float]]
) -> TextModel:
    """Order-r Markov model over contexts of length 0..r.

    ``probs[c]`` is the next-symbol distribution after context string ``c``.
    Keys shorter than ``r`` describe the start of the text; a missing short
    context is only an error if it is reachable.
    """
    if isinstance(alphabet, str):
        alphabet = Alphabet(alphabet)
    if order < 0:
        raise ModelError("order must be >= 0")
    for ctx, dist in probs.items():
        if len(ctx) > order or any(c not in alphabet.index for c in ctx):
            raise ModelError(f"invalid context {ctx!r} for order {order}")
        _check_distribution(ctx, dist, alphabet)
    contexts = [
        "".join(t) for i in range(order + 1) for t in itertools.product(alphabet.symbols, repeat=i)
    ]
    transitions = []
    for ctx in contexts:
        for sym, p in probs.get(ctx, {}).items():
            if p <= 0:
                continue
            nxt = ctx + sym if len(ctx) < order else (ctx + sym)[1:]
            transitions.append((ctx, sym, nxt, p))
    # contexts with no declared distribution are only legal if unreachable
    return make_model(alphabet, contexts, "", transitions)


def string_probability(model: TextModel, s: Sequence[int]) -> float:
    f = model.initial_forward()
    for a in s:
        f = model.forward_step(f, a)
    return float(f.sum())


def exact_string_probability(model: TextModel, s: Sequence[int]) -> Fraction:
    """Rational forward pass; probabilities are read as their shortest decimal form."""
    f: dict[int, Fraction] = {model.start: Fraction(1)}
    for a in s:
        g: dict[int, Fraction] = {}
        for tr in model.transitions:
            if tr.symbol == a and tr.source in f:
                g[tr.target] = g.get(tr.target, Fraction(0)) + f[tr.source] * as_fraction(tr.prob)
        f = g
    return sum(f.values(), Fraction(0))


def as_fraction(p: float) -> Fraction:
    return Fraction(repr(p))


def load_model(path: str | Path) -> TextModel:
    """Read the JSON model format (general form, or ``{"order": r, "probs": ...}`` Markov form)."""
    data = json.loads(Path(path).read_text())
    return model_from_json(data)


def model_from_json(data: Mapping) -> TextModel:
    if "alphabet" not in data:
        raise ModelError("model JSON needs an 'alphabet' key")
    if "order" in data:
        return markov_model(data["alphabet"], int(data["order"]), data["probs"])
    try:
        transitions = [(t["from"], t["symbol"], t["to"], t["prob"]) for t in data["transitions"]]
        return make_model(data["alphabet"], data["contexts"], data["start"], transitions)
    except KeyError as exc:
        raise ModelError(f"model JSON missing key {exc.args[0]!r}") from None
