"""Minimized-DAA size statistics over every pattern of a given length."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from patdist.daa import StateCapExceeded, build_cost_daa, full_state_space_size, minimize_daa
from patdist.matchers import Algorithm, Alphabet, Pattern, analysis_for


@dataclass
class SizeStats:
    m: int
    algorithm: str
    unminimized: int  # |alphabet|^m * (m+1), the full label space
    sizes: list[int] = field(default_factory=list)
    incomplete: bool = False  # state cap hit for some pattern

    @property
    def min(self) -> int:
        return min(self.sizes)

    @property
    def max(self) -> int:
        return max(self.sizes)

    @property
    def avg(self) -> float:
        return sum(self.sizes) / len(self.sizes)

    def row(self) -> dict:
        return {
            "m": self.m,
            "algorithm": self.algorithm,
            "unminimized": self.unminimized,
            "patterns": len(self.sizes),
            "min": self.min,
            "avg": round(self.avg, 4),
            "max": self.max,
            "incomplete": self.incomplete,
        }


def minimized_size(job: tuple[str, tuple[int, ...], str, int | None]) -> int | None:
    algorithm, symbols, alphabet, cap = job
    pattern = Pattern(symbols, Alphabet(alphabet))
    try:
        return minimize_daa(build_cost_daa(analysis_for(algorithm, pattern), state_cap=cap)).n_states
    except StateCapExceeded:
        return None


def sweep(
    alphabet: Alphabet,
    m: int,
    algorithms: Sequence[Algorithm | str] = tuple(Algorithm),
    threads: int = 1,
    state_cap: int | None = None,
) -> list[SizeStats]:
    """One :class:`SizeStats` per algorithm; patterns in lexicographic order."""
    patterns = list(itertools.product(range(len(alphabet)), repeat=m))
    out = []
    for algo in algorithms:
        algo = Algorithm.parse(algo) if isinstance(algo, str) else algo
        jobs = [(algo.value, p, alphabet.symbols, state_cap) for p in patterns]
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                # map() yields in submission order, so results stay pattern-ordered
                sizes = list(pool.map(minimized_size, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
        else:
            sizes = [minimized_size(j) for j in jobs]
        stats = SizeStats(m, algo.value, full_state_space_size(len(alphabet), m))
        stats.sizes = [s for s in sizes if s is not None]
        stats.incomplete = len(stats.sizes) < len(sizes)
        out.append(stats)
    return out
