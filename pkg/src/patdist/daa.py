"""Deterministic arithmetic automata with additive values.

Every state's operation is ``v -> v + emission``, so a DAA is fully described
by a total transition table and one integer emission per state. State 0 is
always the start state and the start value is 0.
"""

from __future__ import annotations

import logging
import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from patdist.matchers import Alphabet, WindowAnalysis

log = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 5_000_000


class StateCapExceeded(RuntimeError):
    pass


class AlphabetMismatchError(ValueError):
    pass


def default_state_cap() -> int:
    env = os.environ.get("PATDIST_STATE_CAP")
    return int(env) if env else DEFAULT_STATE_CAP


@dataclass(frozen=True, eq=False)
class DAA:
    alphabet: Alphabet
    delta: np.ndarray  # (n_states, |alphabet|) int
    emission: np.ndarray  # (n_states,) int
    signed: bool = False  # value domain Z (difference DAAs) rather than N

    start = 0

    def __post_init__(self) -> None:
        delta = np.asarray(self.delta, dtype=np.int64)
        emission = np.asarray(self.emission, dtype=np.int64)
        if delta.ndim != 2 or delta.shape[1] != len(self.alphabet):
            raise ValueError("transition table must be (states, |alphabet|)")
        if emission.shape != (delta.shape[0],):
            raise ValueError("one emission per state required")
        if delta.size and (delta.min() < 0 or delta.max() >= delta.shape[0]):
            raise ValueError("transition target out of range")
        delta.setflags(write=False)
        emission.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "emission", emission)

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    def __len__(self) -> int:
        return self.n_states

    def run(self, s: Sequence[int], state: int = 0, value: int = 0) -> tuple[int, int]:
        """Joint transition over a whole string: ``(state, value)`` after reading ``s``."""
        delta = self.delta
        emission = self.emission
        for c in s:
            state = int(delta[state, c])
            value += int(emission[state])
        return state, value

    def value(self, s: Sequence[int]) -> int:
        return self.run(s)[1]

    def dump(self, out: TextIO) -> None:
        """Plain-text listing: ``state <i> <emission>`` then ``trans <q> <symbol> <q'>``."""
        syms = self.alphabet.symbols
        for q in range(self.n_states):
            out.write(f"state {q} {int(self.emission[q])}\n")
        for q in range(self.n_states):
            for a, sym in enumerate(syms):
                out.write(f"trans {q} {sym} {int(self.delta[q, a])}\n")


def daa_value(daa: DAA, s: Sequence[int]) -> int:
    return daa.value(s)


def full_state_space_size(alphabet_size: int, m: int) -> int:
    return alphabet_size**m * (m + 1)


def build_cost_daa(analysis: WindowAnalysis, state_cap: int | None = None) -> DAA:
    """Reachable part of the (window, countdown) automaton for one analysis.

    Labels are ``(w, x)`` with ``w`` the last m symbols read, packed base-k
    into an int (first symbol most significant), and ``x`` the number of
    symbols still to read before the current window is complete.
    """
    cap = default_state_cap() if state_cap is None else state_cap
    k = len(analysis.alphabet)
    m = analysis.m
    pattern = analysis.pattern.symbols
    high = k ** (m - 1)

    def unpack(code: int) -> tuple[int, ...]:
        out = [0] * m
        for i in range(m - 1, -1, -1):
            code, out[i] = divmod(code, k)
        return tuple(out)

    start_w = 0
    for c in pattern:
        start_w = start_w * k + c

    examined: dict[int, tuple[int, int]] = {}
    index: dict[tuple[int, int], int] = {(start_w, m): 0}
    labels: list[tuple[int, int]] = [(start_w, m)]
    rows: list[list[int]] = []
    emission: list[int] = []
    head = 0
    while head < len(labels):
        w, x = labels[head]
        head += 1
        if x == 0:
            res = examined.get(w)
            if res is None:
                res = examined[w] = analysis.examine(unpack(w))
            emission.append(res[0])
            nx = res[1] - 1
        else:
            emission.append(0)
            nx = x - 1
        base = (w % high) * k
        row = []
        for a in range(k):
            key = (base + a, nx)
            j = index.get(key)
            if j is None:
                j = index[key] = len(labels)
                labels.append(key)
                if len(labels) > cap:
                    raise StateCapExceeded(
                        f"cost DAA for {analysis.algorithm} {analysis.pattern} exceeds "
                        f"state cap {cap}"
                    )
            row.append(j)
        rows.append(row)
    # emission of a state is the cost of its window when x == 0
    return DAA(analysis.alphabet, np.array(rows, dtype=np.int64), np.array(emission, dtype=np.int64))


def reachable(daa: DAA) -> DAA:
    """Drop states not reachable from the start state, renumbering in BFS order."""
    order = _bfs_order(daa.delta, 0)
    if len(order) == daa.n_states and np.all(order == np.arange(daa.n_states)):
        return daa
    remap = np.full(daa.n_states, -1, dtype=np.int64)
    remap[order] = np.arange(len(order))
    return DAA(daa.alphabet, remap[daa.delta[order]], daa.emission[order], daa.signed)


def _bfs_order(delta: np.ndarray, start: int) -> np.ndarray:
    rows = delta.tolist()
    seen = [False] * len(rows)
    seen[start] = True
    order = [start]
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for t in rows[q]:
            if not seen[t]:
                seen[t] = True
                order.append(t)
                queue.append(t)
    return np.array(order, dtype=np.int64)


def hopcroft_partition(delta: np.ndarray, initial_classes: Iterable[int]) -> list[int]:
    """Coarsest transition-stable refinement of ``initial_classes``.

    Returns a block id per state. Hopcroft's splitter worklist over blocks;
    each popped block is used as a splitter for every symbol.
    """
    n, k = delta.shape
    classes = list(initial_classes)
    block_of = [0] * n
    blocks: list[set[int]] = []
    ids: dict[int, int] = {}
    for q, c in enumerate(classes):
        b = ids.get(c)
        if b is None:
            b = ids[c] = len(blocks)
            blocks.append(set())
        blocks[b].add(q)
        block_of[q] = b

    # inverse[a][q] = predecessors of q on symbol a
    inverse: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(k)]
    for q, row in enumerate(delta.tolist()):
        for a, t in enumerate(row):
            inverse[a][t].append(q)

    pending = set(range(len(blocks)))
    if len(blocks) > 1:
        pending.discard(max(range(len(blocks)), key=lambda b: len(blocks[b])))
    worklist = list(pending)
    while worklist:
        splitter = worklist.pop()
        pending.discard(splitter)
        members = list(blocks[splitter])
        for a in range(k):
            inv = inverse[a]
            hit: dict[int, list[int]] = {}
            for q in members:
                for r in inv[q]:
                    hit.setdefault(block_of[r], []).append(r)
            for b, states in hit.items():
                block = blocks[b]
                if len(states) == len(block):
                    continue
                moved = set(states)
                block -= moved
                nb = len(blocks)
                blocks.append(moved)
                for r in moved:
                    block_of[r] = nb
                if b in pending:
                    pending.add(nb)
                    worklist.append(nb)
                else:
                    smaller = nb if len(moved) <= len(block) else b
                    pending.add(smaller)
                    worklist.append(smaller)
    return block_of


def minimize_daa(daa: DAA) -> DAA:
    """Smallest DAA emitting the same value sequence on every input.

    The initial partition groups states by emission; the result is numbered
    in BFS order from the start state, so equal automata come out identical.
    """
    daa = reachable(daa)
    block_of = np.array(hopcroft_partition(daa.delta, daa.emission.tolist()), dtype=np.int64)
    n_blocks = int(block_of.max()) + 1
    rep = np.full(n_blocks, -1, dtype=np.int64)
    # the first state of each block is its representative
    for q in range(daa.n_states - 1, -1, -1):
        rep[block_of[q]] = q
    delta = block_of[daa.delta[rep]]
    emission = daa.emission[rep]
    start = int(block_of[0])
    order = _bfs_order(delta, start)
    remap = np.empty(n_blocks, dtype=np.int64)
    remap[order] = np.arange(n_blocks)
    return DAA(daa.alphabet, remap[delta[order]], emission[order], daa.signed)


def check_same_alphabet(a: Alphabet, b: Alphabet) -> None:
    if a.symbols != b.symbols:
        raise AlphabetMismatchError(f"alphabets differ: {a.symbols!r} vs {b.symbols!r}")
