"""Order-invariant oblivious F2 estimation and median amplification.

The base estimator is a tug-of-war mean-of-squares sketch: each bucket keeps
the signed sum g_b(i) * f_i under a 4-wise independent sign hash, and the
mean of the squared buckets estimates F2.  Bucket count 20/eps^2 makes the
relative error exceed eps with probability at most 1/10 (Chebyshev, variance
2*F2^2/buckets).  Dividing by (1 - eps) shifts the two-sided guarantee to the
one-sided form F2 <= y <= (1+3eps)*F2.

The sketch state is a linear function of the frequency vector, so it is
order invariant by construction.  :class:`SketchBank` evaluates many
independent copies at once by caching pairwise sign-column inner products;
its per-copy estimates are bit-identical to running :class:`AmsSketch`
instances with the same seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ConfigError, Update
from .kernels import ITEM_MAX, copy_dot, fill_fourwise_coeffs, sign_column


def bucket_count_for(epsilon_in: float) -> int:
    """Means dimension ceil(20 / eps^2) for per-copy success >= 9/10."""
    if not 0 < epsilon_in < 1:
        raise ConfigError(f"internal epsilon must be in (0, 1), got {epsilon_in}")
    return math.ceil(20.0 / (epsilon_in * epsilon_in))


@dataclass(frozen=True)
class SketchConfig:
    epsilon_in: float
    bucket_count: int
    seed: int


class AmsSketch:
    """One sketch copy: signed bucket accumulators under a seeded sign hash."""

    def __init__(self, epsilon_in: float, seed: int):
        b = bucket_count_for(epsilon_in)
        self.config = SketchConfig(epsilon_in, b, seed)
        self._coeffs = fill_fourwise_coeffs(
            np.array([seed], dtype=np.uint64), b
        )
        self.accumulators = np.zeros(b, dtype=np.int64)
        self._sign_cache: dict[int, np.ndarray] = {}

    def _signs(self, item: int) -> np.ndarray:
        col = self._sign_cache.get(item)
        if col is None:
            if not 1 <= item <= ITEM_MAX:
                raise ValueError(f"item {item} outside hashable range [1, {ITEM_MAX}]")
            col = np.empty((1, self.config.bucket_count), dtype=np.int8)
            sign_column(self._coeffs, item, col)
            col = col[0]
            self._sign_cache[item] = col
        return col

    def update(self, u: Update) -> None:
        self.accumulators += u.delta * self._signs(u.item).astype(np.int64)

    def raw_estimate(self) -> float:
        """Mean of squared accumulators (two-sided estimator)."""
        s = int(np.einsum("i,i->", self.accumulators, self.accumulators))
        return s / self.config.bucket_count

    def estimate(self) -> float:
        """One-sided estimate: raw mean of squares shifted by 1/(1 - eps)."""
        return self.raw_estimate() / (1.0 - self.config.epsilon_in)


class SketchBank:
    """t independent sketch copies evaluated together.

    Exploits linearity: with D_c[i, j] the inner product of the sign columns
    of items i and j in copy c, the sum of squared buckets is the quadratic
    form f' D_c f.  The bank maintains D, w = D f and S = f' D f
    incrementally, so a round costs O(t * items) instead of O(t * buckets).
    Estimates match per-copy :class:`AmsSketch` runs exactly.
    """

    def __init__(self, epsilon_in: float, seeds: Sequence[int]):
        self.bucket_count = bucket_count_for(epsilon_in)
        self.epsilon_in = epsilon_in
        self.seeds = np.asarray(list(seeds), dtype=np.uint64)
        self.copies = len(self.seeds)
        if self.copies < 1:
            raise ConfigError("bank needs at least one copy")
        self._coeffs = fill_fourwise_coeffs(self.seeds, self.bucket_count)
        self._index: dict[int, int] = {}
        self._cols: list[np.ndarray] = []
        cap = 8
        self._freq = np.zeros(cap, dtype=np.int64)
        self._gram = np.zeros((self.copies, cap, cap), dtype=np.int64)
        self._w = np.zeros((self.copies, cap), dtype=np.int64)
        self._sq = np.zeros(self.copies, dtype=np.int64)
        self.update_count = 0

    def _grow(self) -> None:
        cap = self._freq.shape[0] * 2
        j = len(self._cols)
        freq = np.zeros(cap, dtype=np.int64)
        freq[:j] = self._freq[:j]
        gram = np.zeros((self.copies, cap, cap), dtype=np.int64)
        gram[:, :j, :j] = self._gram[:, :j, :j]
        w = np.zeros((self.copies, cap), dtype=np.int64)
        w[:, :j] = self._w[:, :j]
        self._freq, self._gram, self._w = freq, gram, w

    def _add_item(self, item: int) -> int:
        if not 1 <= item <= ITEM_MAX:
            raise ValueError(f"item {item} outside hashable range [1, {ITEM_MAX}]")
        j = len(self._cols)
        if j == self._freq.shape[0]:
            self._grow()
        col = np.empty((self.copies, self.bucket_count), dtype=np.int8)
        sign_column(self._coeffs, item, col)
        for i, other in enumerate(self._cols):
            d = copy_dot(col, other)
            self._gram[:, j, i] = d
            self._gram[:, i, j] = d
        self._gram[:, j, j] = self.bucket_count
        # w entry for the new item against the current frequency vector
        if j:
            self._w[:, j] = np.einsum("ci,i->c", self._gram[:, j, :j], self._freq[:j])
        else:
            self._w[:, j] = 0
        self._cols.append(col)
        self._index[item] = j
        return j

    def update(self, u: Update) -> None:
        q = self._index.get(u.item)
        if q is None:
            q = self._add_item(u.item)
        j = len(self._cols)
        d = u.delta
        self._sq += 2 * d * self._w[:, q] + self.bucket_count
        self._w[:, :j] += d * self._gram[:, :j, q]
        self._freq[q] += d
        self.update_count += 1

    def raw_estimates(self) -> np.ndarray:
        """Per-copy mean of squared buckets, exact while below 2^53."""
        return self._sq / self.bucket_count

    def estimates(self) -> np.ndarray:
        """Per-copy one-sided estimates (shifted by 1/(1 - eps))."""
        return self.raw_estimates() / (1.0 - self.epsilon_in)


def amplification_copies(delta: float) -> int:
    """Copies needed to push a 9/10 estimator to success 1 - delta: 12 ln(1/delta)."""
    if not 0 < delta <= 0.1:
        raise ConfigError(f"delta must be in (0, 1/10], got {delta}")
    return math.ceil(12.0 * math.log(1.0 / delta))


def median_amplify(estimates: Sequence[float]) -> float:
    """Lower median: element (len-1)//2 of the sorted estimates."""
    if len(estimates) == 0:
        raise ValueError("median of an empty list")
    return sorted(estimates)[(len(estimates) - 1) // 2]


def lower_median(values: np.ndarray) -> float:
    """Lower median of a numpy vector via partial selection."""
    k = (values.shape[0] - 1) // 2
    return float(np.partition(values, k)[k])
