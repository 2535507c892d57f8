"""Exact turnstile-stream bookkeeping.

Domain objects shared by every player in the arena: unit updates, the sparse
frequency vector they accumulate into, exact F1/F2 moments, the one-sided
approximation predicate, and the flip number of a value sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .kernels import flip_count


class ConfigError(ValueError):
    """Invalid parameter combination handed to a constructor or runner."""


class ProtocolError(RuntimeError):
    """A player broke the round protocol (stream too long, queue exhausted...)."""


class Update(NamedTuple):
    """One turnstile event: insert (+1) or delete (-1) one copy of an item."""

    item: int
    delta: int

    def validate(self, n: int) -> None:
        if self.delta not in (-1, 1):
            raise ValueError(f"delta must be -1 or +1, got {self.delta}")
        if not 1 <= self.item <= n:
            raise ValueError(f"item {self.item} outside universe [1, {n}]")


@dataclass(frozen=True)
class ApproxSpec:
    """Parameters of a one-sided (1+epsilon)-estimation task.

    epsilon: relative error in (0, 1]; alpha: ceiling of the tracked value
    (>= 2); m: maximum stream length.
    """

    epsilon: float
    alpha: float
    m: int

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ConfigError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.alpha < 2:
            raise ConfigError(f"alpha must be >= 2, got {self.alpha}")
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")


class FrequencyVector:
    """Sparse item -> signed count map over the universe [1, n].

    Entries reaching zero are pruned, so ``density`` is always the number of
    items with nonzero frequency.  Instances are owned by a single writer;
    use :func:`apply_update` for a pure (copying) update.
    """

    __slots__ = ("entries", "n")

    def __init__(self, n: int, entries: dict[int, int] | None = None):
        if n < 1:
            raise ConfigError(f"universe size must be >= 1, got {n}")
        self.n = n
        self.entries: dict[int, int] = {}
        if entries:
            for item, freq in entries.items():
                if freq != 0:
                    Update(item, 1).validate(n)
                    self.entries[item] = int(freq)

    def apply(self, u: Update) -> None:
        """Apply one update in place, pruning a zeroed entry."""
        u.validate(self.n)
        new = self.entries.get(u.item, 0) + u.delta
        if new == 0:
            self.entries.pop(u.item, None)
        else:
            self.entries[u.item] = new

    def moment(self, p: int) -> float:
        """Exact F_p = sum |freq|^p over stored entries, p in {1, 2}."""
        if p == 2:
            return float(sum(f * f for f in self.entries.values()))
        if p == 1:
            return float(sum(abs(f) for f in self.entries.values()))
        raise ConfigError(f"moment exponent must be 1 or 2, got {p}")

    @property
    def density(self) -> int:
        """Number of nonzero entries."""
        return len(self.entries)

    def copy(self) -> "FrequencyVector":
        out = FrequencyVector(self.n)
        out.entries = dict(self.entries)
        return out

    def __getitem__(self, item: int) -> int:
        return self.entries.get(item, 0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FrequencyVector)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"FrequencyVector(n={self.n}, entries={self.entries!r})"


def apply_update(v: FrequencyVector, u: Update) -> FrequencyVector:
    """Pure update: return a new vector with u applied, v untouched."""
    out = v.copy()
    out.apply(u)
    return out


def exact_moment(v: FrequencyVector, p: int) -> float:
    """Exact F_p moment of v (0.0 for an empty vector)."""
    return v.moment(p)


def density(v: FrequencyVector) -> int:
    return v.density


def is_correct_estimate(x: float, y: float, epsilon: float) -> bool:
    """One-sided check: x <= y < (1+epsilon)*x; a true value of 0 admits only 0."""
    if x == 0:
        return y == 0
    return x <= y < (1.0 + epsilon) * x


def flip_number(seq: Iterable[float], epsilon: float) -> int:
    """Maximum k such that some index chain i_1 < ... < i_k has every earlier
    chosen value outside the closed band [(1-eps)*y, (1+eps)*y] of the next.

    This is the exact maximum over all subsequences (a constant positive
    sequence has flip number 1).
    """
    values = np.asarray(list(seq), dtype=np.float64)
    if values.size == 0:
        raise ValueError("flip_number needs a nonempty sequence")
    return int(flip_count(values, float(epsilon)))


def ceil_power(m: int, c: float) -> int:
    """ceil(m^c) with a snap for float error on exact integer powers."""
    x = float(m) ** c
    r = round(x)
    if abs(x - r) < 1e-9 * max(1.0, abs(r)):
        return int(r)
    return int(math.ceil(x))
