"""Sparse integer-valued probability mass functions and their file formats."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

TOLERANCE = 1e-9
DEFAULT_QUANTILES = (0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99)


class InvalidDistribution(ValueError):
    pass


@dataclass(frozen=True)
class Distribution:
    """``values`` strictly increasing; ``probs`` aligned with them."""

    values: tuple[int, ...]
    probs: tuple[float, ...]
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if len(self.values) != len(self.probs):
            raise InvalidDistribution("values and probabilities differ in length")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InvalidDistribution("values must be strictly increasing")
        if any(p < 0 for p in self.probs):
            raise InvalidDistribution("negative probability")
        object.__setattr__(self, "_pmf", dict(zip(self.values, self.probs)))

    @classmethod
    def from_mapping(cls, pmf: Mapping[int, float], **meta: Any) -> "Distribution":
        items = sorted((int(v), float(p)) for v, p in pmf.items())
        return cls(tuple(v for v, _ in items), tuple(p for _, p in items), meta)

    @classmethod
    def from_array(cls, probs: np.ndarray, offset: int = 0, **meta: Any) -> "Distribution":
        """Dense array indexed by ``value - offset``; zero entries are dropped."""
        nz = np.flatnonzero(probs)
        return cls(tuple(int(i) + offset for i in nz), tuple(float(probs[i]) for i in nz), meta)

    @classmethod
    def dirac(cls, value: int, **meta: Any) -> "Distribution":
        return cls((int(value),), (1.0,), meta)

    def with_meta(self, **meta: Any) -> "Distribution":
        return Distribution(self.values, self.probs, {**self.meta, **meta})

    def as_dict(self) -> dict[int, float]:
        return dict(self._pmf)

    def __getitem__(self, value: int) -> float:
        return self._pmf.get(value, 0.0)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def total(self) -> float:
        return math.fsum(self.probs)

    def check(self, tol: float = TOLERANCE) -> None:
        if abs(self.total - 1.0) > tol:
            raise InvalidDistribution(f"probabilities sum to {self.total!r}, not 1")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(v for v, p in zip(self.values, self.probs) if p > 0)

    @property
    def mean(self) -> float:
        return math.fsum(v * p for v, p in zip(self.values, self.probs))

    @property
    def variance(self) -> float:
        mu = self.mean
        return math.fsum(p * (v - mu) ** 2 for v, p in zip(self.values, self.probs))

    def quantile(self, q: float) -> int:
        """Smallest value whose cumulative mass reaches ``q``."""
        acc = 0.0
        for v, p in zip(self.values, self.probs):
            acc += p
            if acc >= q - 1e-15:
                return v
        return self.values[-1]

    def sign_probabilities(self) -> tuple[float, float, float]:
        """``(P(X < 0), P(X = 0), P(X > 0))``."""
        neg = math.fsum(p for v, p in zip(self.values, self.probs) if v < 0)
        zero = math.fsum(p for v, p in zip(self.values, self.probs) if v == 0)
        pos = math.fsum(p for v, p in zip(self.values, self.probs) if v > 0)
        return neg, zero, pos

    def reflect(self) -> "Distribution":
        return Distribution(
            tuple(-v for v in reversed(self.values)), tuple(reversed(self.probs)), dict(self.meta)
        )

    # serialization ----------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("value,probability\n")
        for v, p in zip(self.values, self.probs):
            buf.write(f"{v},{p:.17g}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        meta = {k: v for k, v in self.meta.items()}
        meta.setdefault("mean", self.mean)
        meta.setdefault("variance", self.variance)
        doc = {
            "metadata": meta,
            "pmf": [{"value": v, "probability": p} for v, p in zip(self.values, self.probs)],
        }
        return json.dumps(doc, indent=2) + "\n"

    def dumps(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def distribution_stats(d: Distribution, quantiles: Sequence[float] = DEFAULT_QUANTILES) -> dict[str, Any]:
    support = d.support
    return {
        "mean": d.mean,
        "variance": d.variance,
        "min": support[0],
        "max": support[-1],
        "quantiles": {q: d.quantile(q) for q in quantiles},
    }


def loads(text: str) -> Distribution:
    """Parse either serialization; the format is sniffed from the first character."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        meta = dict(doc.get("metadata", {}))
        pmf = {int(row["value"]): float(row["probability"]) for row in doc["pmf"]}
        return Distribution.from_mapping(pmf, **meta)
    rows = csv.DictReader(io.StringIO(stripped))
    if rows.fieldnames != ["value", "probability"]:
        raise InvalidDistribution("CSV header must be 'value,probability'")
    return Distribution.from_mapping({int(r["value"]): float(r["probability"]) for r in rows})


def load(path: str | Path) -> Distribution:
    return loads(Path(path).read_text())


def empirical(values: Iterable[int], **meta: Any) -> Distribution:
    arr = np.asarray(list(values), dtype=np.int64)
    vals, counts = np.unique(arr, return_counts=True)
    return Distribution(tuple(int(v) for v in vals), tuple(float(c) / len(arr) for c in counts), meta)


def interior_zero_period(d: Distribution, tail: float = 1e-9) -> tuple[int | None, list[int]]:
    """Smallest period of the zero-probability values inside the support.

    The interior runs from the smallest supported value up to the
    ``1 - tail`` quantile, so that the far upper tail (mass below ``tail``)
    cannot mask the pattern. Returns ``(period, zeros)``; the period is
    ``None`` when there are no interior zeros or they are not periodic.
    """
    lo = d.support[0]
    hi = d.quantile(1.0 - tail)
    zero = [d[v] == 0.0 for v in range(lo, hi + 1)]
    zeros = [lo + i for i, z in enumerate(zero) if z]
    if not zeros:
        return None, zeros
    span = len(zero)
    for p in range(1, span // 2 + 1):
        if all(zero[i] == zero[i + p] for i in range(span - p)):
            return p, zeros
    return None, zeros
