"""Ranks, relative orders, forgetting weights and the brute-force occurrence oracle.

All positions are 1-based: an occurrence of a length-``m`` pattern is
identified by the position ``j`` of the last element of its window
``t[j-m+1..j]``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Pattern = tuple[int, ...]


class InvalidInput(ValueError):
    """Raised for malformed series, windows or patterns."""


class InvalidConfig(ValueError):
    """Raised for out-of-range mining or clustering parameters."""


@dataclass(frozen=True)
class TimeSeries:
    values: tuple[float, ...]
    id: str | None = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise InvalidInput("time series must contain at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInput("time series values must be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def at(self, j: int) -> float:
        """Value at 1-based position ``j``."""
        return self.values[j - 1]


def as_series(t, id: str | None = None) -> TimeSeries:
    if isinstance(t, TimeSeries):
        return t
    return TimeSeries(tuple(t), id=id)


def relative_order(window: Sequence[float]) -> tuple[int, ...]:
    """Rank of each element = 1 + number of strictly smaller elements.

    Ties produce repeated ranks, so a window with duplicates never equals a
    pattern.
    """
    if len(window) == 0:
        raise InvalidInput("relative order of an empty window")
    return tuple(1 + sum(1 for x in window if x < y) for y in window)


def is_pattern(ranks: Sequence[int]) -> bool:
    return sorted(ranks) == list(range(1, len(ranks) + 1))


def check_pattern(p: Iterable[int]) -> Pattern:
    p = tuple(int(r) for r in p)
    if not p or not is_pattern(p):
        raise InvalidInput(f"{p!r} is not a permutation of 1..{len(p)}")
    return p


@dataclass(frozen=True)
class ForgettingWeights:
    n: int
    k: float
    values: tuple[float, ...] = field(repr=False)

    def at(self, j: int) -> float:
        return self.values[j - 1]

    @property
    def total(self) -> float:
        return fsup(range(1, self.n + 1), self)


def forgetting_weights(n: int, k: float) -> ForgettingWeights:
    """f_j = exp(-k (n - j)) for j = 1..n."""
    if n < 1:
        raise InvalidConfig(f"series length must be >= 1, got {n}")
    if not k > 0 or not math.isfinite(k):
        raise InvalidConfig(f"forgetting factor k must be > 0, got {k}")
    if k >= 1:
        warnings.warn(f"forgetting factor k={k} >= 1 decays very fast", stacklevel=2)
    values = tuple(math.exp(-k * (n - j)) for j in range(1, n + 1))
    return ForgettingWeights(n=n, k=float(k), values=values)


def fsup(ends: Iterable[int], weights: ForgettingWeights) -> float:
    """Forgetting-weighted support: sum of f_j over occurrence end positions.

    Every support in the package goes through here so that all mining
    routes add the same floats in the same (ascending) order.
    """
    f = weights.values
    n = weights.n
    total = 0.0
    for j in sorted(ends):
        if j < 1 or j > n:
            raise AssertionError(f"end position {j} outside [1, {n}]")
        total += f[j - 1]
    return total


def oracle_occurrences(t, p: Sequence[int]) -> list[int]:
    """All end positions whose window has relative order exactly ``p``."""
    vals = t.values if isinstance(t, TimeSeries) else tuple(t)
    p = tuple(p)
    m = len(p)
    return [
        j
        for j in range(m, len(vals) + 1)
        if relative_order(vals[j - m:j]) == p
    ]
