"""Window cost/shift functions for Horspool, B(N)DM and BOM, plus the
automata they rely on and plain reference matchers.

Windows, patterns and texts are sequences of dense symbol indices. A window
``w`` always has length ``m`` and ``w[m-1]`` is its rightmost character.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

MAX_ALPHABET = 64


class Algorithm(str, enum.Enum):
    HORSPOOL = "horspool"
    BDM = "bdm"
    BOM = "bom"

    @classmethod
    def parse(cls, name: str) -> "Algorithm":
        key = name.strip().lower()
        if key in ("bndm", "b(n)dm"):
            return cls.BDM
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown algorithm {name!r}") from None


@dataclass(frozen=True)
class Alphabet:
    symbols: str
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"alphabet {self.symbols!r} has repeated symbols")
        if len(self.symbols) > MAX_ALPHABET:
            raise ValueError(f"alphabet larger than {MAX_ALPHABET} symbols")
        object.__setattr__(self, "index", {c: i for i, c in enumerate(self.symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def encode(self, text: str) -> tuple[int, ...]:
        try:
            return tuple(self.index[c] for c in text)
        except KeyError as exc:
            raise ValueError(f"symbol {exc.args[0]!r} not in alphabet {self.symbols!r}") from None

    def decode(self, seq: Sequence[int]) -> str:
        return "".join(self.symbols[i] for i in seq)


@dataclass(frozen=True)
class Pattern:
    symbols: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        if len(self.symbols) < 1:
            raise ValueError("pattern must have length >= 1")
        if any(not 0 <= s < len(self.alphabet) for s in self.symbols):
            raise ValueError("pattern symbol outside alphabet")

    @classmethod
    def from_string(cls, text: str, alphabet: Alphabet | str) -> "Pattern":
        if isinstance(alphabet, str):
            alphabet = Alphabet(alphabet)
        return cls(alphabet.encode(text), alphabet)

    @property
    def m(self) -> int:
        return len(self.symbols)

    @property
    def reversed(self) -> tuple[int, ...]:
        return self.symbols[::-1]

    def __str__(self) -> str:
        return self.alphabet.decode(self.symbols)


@dataclass(frozen=True)
class WindowAnalysis:
    """Cost and shift of every length-m window for one algorithm and pattern.

    ``examine(w)`` returns ``(cost, shift)``; both lie in ``1..m``. The
    functions are evaluated on demand, never tabulated over all windows.
    """

    pattern: Pattern
    algorithm: str
    examine: Callable[[Sequence[int]], tuple[int, int]]

    @property
    def m(self) -> int:
        return self.pattern.m

    @property
    def alphabet(self) -> Alphabet:
        return self.pattern.alphabet

    def cost(self, window: Sequence[int]) -> int:
        return self.examine(window)[0]

    def shift(self, window: Sequence[int]) -> int:
        return self.examine(window)[1]


# -- Horspool -----------------------------------------------------------------


def horspool_shift_table(pattern: Pattern) -> tuple[int, ...]:
    """``ashift[a] = (m-1) - rightpos(a)``, rightpos ignoring the last position."""
    m = pattern.m
    rightpos = [-1] * len(pattern.alphabet)
    for i in range(m - 1):
        rightpos[pattern.symbols[i]] = i
    return tuple((m - 1) - r for r in rightpos)


def horspool_analysis(pattern: Pattern) -> WindowAnalysis:
    p = pattern.symbols
    m = pattern.m
    ashift = horspool_shift_table(pattern)

    def examine(w: Sequence[int]) -> tuple[int, int]:
        cost = m
        for i in range(1, m + 1):
            if p[m - i] != w[m - i]:
                cost = i
                break
        return cost, ashift[w[m - 1]]

    return WindowAnalysis(pattern, Algorithm.HORSPOOL.value, examine)


# -- automata -----------------------------------------------------------------


@dataclass(frozen=True)
class SuffixAutomaton:
    """Minimal DFA for the substrings of a word (here: the reversed pattern)."""

    word: tuple[int, ...]
    transitions: tuple[dict[int, int], ...]
    links: tuple[int, ...]
    accepting: frozenset[int]
    initial: int = 0

    def step(self, state: int, symbol: int) -> int | None:
        return self.transitions[state].get(symbol)

    def run(self, seq: Sequence[int]) -> int | None:
        state: int | None = self.initial
        for c in seq:
            state = self.transitions[state].get(c)
            if state is None:
                return None
        return state

    def __len__(self) -> int:
        return len(self.transitions)


def build_suffix_automaton(pattern: Pattern) -> SuffixAutomaton:
    """Online DAWG construction over ``rev(p)``."""
    word = pattern.reversed
    trans: list[dict[int, int]] = [{}]
    link = [-1]
    length = [0]
    last = 0
    for c in word:
        cur = len(trans)
        trans.append({})
        link.append(-1)
        length.append(length[last] + 1)
        p = last
        while p != -1 and c not in trans[p]:
            trans[p][c] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = trans[p][c]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = len(trans)
                trans.append(dict(trans[q]))
                link.append(link[q])
                length.append(length[p] + 1)
                while p != -1 and trans[p].get(c) == q:
                    trans[p][c] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur
    accepting = set()
    s = last
    while s != -1:
        accepting.add(s)
        s = link[s]
    return SuffixAutomaton(word, tuple(trans), tuple(link), frozenset(accepting))


@dataclass(frozen=True)
class FactorOracle:
    """Factor oracle of the reversed pattern: states ``0..m``."""

    word: tuple[int, ...]
    transitions: tuple[dict[int, int], ...]
    supply: tuple[int, ...]
    accepting: frozenset[int]
    initial: int = 0

    def step(self, state: int, symbol: int) -> int | None:
        return self.transitions[state].get(symbol)

    def run(self, seq: Sequence[int]) -> int | None:
        state: int | None = self.initial
        for c in seq:
            state = self.transitions[state].get(c)
            if state is None:
                return None
        return state

    def __len__(self) -> int:
        return len(self.transitions)


def build_factor_oracle(pattern: Pattern) -> FactorOracle:
    word = pattern.reversed
    m = len(word)
    trans: list[dict[int, int]] = [{} for _ in range(m + 1)]
    supply = [-1] * (m + 1)
    for i in range(1, m + 1):
        c = word[i - 1]
        trans[i - 1][c] = i
        k = supply[i - 1]
        while k > -1 and c not in trans[k]:
            trans[k][c] = i
            k = supply[k]
        supply[i] = 0 if k == -1 else trans[k][c]
    # accepting = states reached by some suffix of the word (incl. the empty one)
    accepting = set()
    for start in range(m + 1):
        state = 0
        for c in word[start:]:
            state = trans[state][c]
        accepting.add(state)
    return FactorOracle(word, tuple(trans), tuple(supply), frozenset(accepting))


def _backward_examiner(automaton: SuffixAutomaton | FactorOracle, m: int, accepting: frozenset[int]):
    trans = automaton.transitions
    initial = automaton.initial

    def examine(w: Sequence[int]) -> tuple[int, int]:
        state = initial
        last_prefix = 0
        for i in range(1, m + 1):
            state = trans[state].get(w[m - i])
            if state is None:
                return i, m - last_prefix
            if i < m and state in accepting:
                last_prefix = i
        return m, m - last_prefix

    return examine


def accepted_prefix_lengths(
    automaton: SuffixAutomaton | FactorOracle, window: Sequence[int], accepting: frozenset[int] | None = None
) -> set[int]:
    """The set I(w): numbers of characters read (< m) at which the automaton accepts."""
    if accepting is None:
        accepting = automaton.accepting
    m = len(window)
    found = {0}
    state: int | None = automaton.initial
    for i in range(1, m):
        state = automaton.step(state, window[m - i])
        if state is None:
            break
        if state in accepting:
            found.add(i)
    return found


def bdm_analysis(pattern: Pattern) -> WindowAnalysis:
    sa = build_suffix_automaton(pattern)
    return WindowAnalysis(pattern, Algorithm.BDM.value, _backward_examiner(sa, pattern.m, sa.accepting))


def bom_terminals(oracle: FactorOracle, mode: str = "all") -> frozenset[int]:
    """States BOM treats as recognizing a pattern prefix.

    ``"all"``: every oracle state (any string read without FAIL may start an
    occurrence), the classic BOM shift. ``"suffix"``: only states reached by
    a suffix of the reversed pattern.
    """
    if mode == "all":
        return frozenset(range(len(oracle)))
    if mode == "suffix":
        return oracle.accepting
    raise ValueError(f"unknown terminal mode {mode!r}")


def bom_analysis(pattern: Pattern, terminals: str = "all") -> WindowAnalysis:
    fo = build_factor_oracle(pattern)
    return WindowAnalysis(
        pattern, Algorithm.BOM.value, _backward_examiner(fo, pattern.m, bom_terminals(fo, terminals))
    )


_ANALYSES = {
    Algorithm.HORSPOOL: horspool_analysis,
    Algorithm.BDM: bdm_analysis,
    Algorithm.BOM: bom_analysis,
}


def analysis_for(algorithm: Algorithm | str, pattern: Pattern) -> WindowAnalysis:
    if not isinstance(algorithm, Algorithm):
        algorithm = Algorithm.parse(algorithm)
    return _ANALYSES[algorithm](pattern)


# -- matchers -----------------------------------------------------------------


@dataclass(frozen=True)
class MatchResult:
    occurrences: int
    cost: int


def run_matcher(analysis: WindowAnalysis, text: Sequence[int]) -> MatchResult:
    """Generic window loop driven by the analysis' cost and shift."""
    m = analysis.m
    p = analysis.pattern.symbols
    text = tuple(text)
    occ = cost = 0
    t = m - 1
    while t < len(text):
        w = text[t - m + 1 : t + 1]
        c, sh = analysis.examine(w)
        cost += c
        if w == p:
            occ += 1
        t += sh
    return MatchResult(occ, cost)


def horspool_with_cost(text: Sequence[int], pattern: Pattern) -> MatchResult:
    """Horspool search counting text accesses, written as a literal loop."""
    p = pattern.symbols
    m = pattern.m
    ashift = horspool_shift_table(pattern)
    occ = cost = 0
    t = m - 1
    while t < len(text):
        i = 0
        while i < m:
            cost += 1
            if text[t - i] != p[(m - 1) - i]:
                break
            i += 1
        if i == m:
            occ += 1
        t += ashift[text[t]]
    return MatchResult(occ, cost)


def backward_search(
    text: Sequence[int],
    pattern: Pattern,
    automaton: SuffixAutomaton | FactorOracle,
    accepting: frozenset[int] | None = None,
) -> MatchResult:
    """Backward automaton matching (BDM or BOM, depending on ``automaton``).

    Scans each window right to left through the automaton, remembering the
    last position where a prefix of the pattern was recognized.
    """
    if accepting is None:
        accepting = automaton.accepting
    m = pattern.m
    occ = cost = 0
    pos = 0  # left end of the window
    while pos + m <= len(text):
        state: int | None = automaton.initial
        j = m
        last = m
        while state is not None and j > 0:
            cost += 1
            state = automaton.step(state, text[pos + j - 1])
            j -= 1
            if state is not None and j > 0 and state in accepting:
                last = j
        if state is not None:
            occ += 1
        pos += last
    return MatchResult(occ, cost)


def reference_search(algorithm: Algorithm | str, text: Sequence[int], pattern: Pattern) -> MatchResult:
    """Run the textbook form of an algorithm, independent of WindowAnalysis."""
    if not isinstance(algorithm, Algorithm):
        algorithm = Algorithm.parse(algorithm)
    if algorithm is Algorithm.HORSPOOL:
        return horspool_with_cost(text, pattern)
    if algorithm is Algorithm.BDM:
        return backward_search(text, pattern, build_suffix_automaton(pattern))
    fo = build_factor_oracle(pattern)
    return backward_search(text, pattern, fo, bom_terminals(fo))
