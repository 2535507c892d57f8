"""Defensive tracking algorithms.

Three trackers share the step(update) -> estimate interface:

* :class:`ExactTracker` keeps the exact sparse frequency vector and emits the
  net-rounded exact moment.  It is always correct, and against a
  deterministic adversary with k persistent bits it can only ever see a
  bounded number of distinct items, because its own outputs are confined to
  the net vocabulary.

* :class:`RobustSketchTracker` is the sketch-based wrapper for randomized
  bounded-memory adversaries: t independent sketch copies, the lower median
  of their one-sided estimates, rounded onto a net of granularity eps/3.
  The copy count covers a union bound over every way the adversary's
  pre-generatable streams can be interleaved, with tau such streams: one per
  (estimate vocabulary x persistent-memory state) input state.

* :class:`AmplifiedOblivious` is the classic oblivious baseline: median of
  12 ln(1/delta) copies, no rounding.  It carries no adaptivity protection
  and exists as the foil the attackers are aimed at.
"""

from __future__ import annotations

import math

from .core import ConfigError, FrequencyVector, ProtocolError, Update
from .net import EstimateNet
from .oblivious import SketchBank, amplification_copies, lower_median
from .seeding import copy_seed


class ExactTracker:
    """Deterministic exact tracker: sparse vector plus net-rounded moment."""

    def __init__(self, n: int, net: EstimateNet, moment_exponent: int = 2):
        if moment_exponent not in (1, 2):
            raise ConfigError(f"moment exponent must be 1 or 2, got {moment_exponent}")
        self.vector = FrequencyVector(n)
        self.net = net
        self.moment_exponent = moment_exponent
        self._seen: set[int] = set()
        self.distinct_keys_high_water = 0
        self._moment = 0  # exact running value, maintained incrementally

    def step(self, u: Update) -> float:
        u.validate(self.vector.n)
        old = self.vector.entries.get(u.item, 0)
        self.vector.apply(u)
        if u.item not in self._seen:
            self._seen.add(u.item)
            self.distinct_keys_high_water = len(self._seen)
        new = old + u.delta
        if self.moment_exponent == 2:
            self._moment += new * new - old * old
        else:
            self._moment += abs(new) - abs(old)
        return self.net.round_up(float(self._moment))

    @property
    def exact_value(self) -> float:
        return float(self._moment)


def tau_for_bounded_memory(k: int, net: EstimateNet) -> int:
    """Adversary input states: (net points + the zero output) x 2^k memories."""
    if k < 0:
        raise ConfigError(f"persistent bits k must be >= 0, got {k}")
    return (len(net.points) + 1) * (1 << k)


def robust_copies(m: int, tau: int, delta: float) -> int:
    """Copies for a union bound over m^tau prefix selections:
    ceil(12 * (tau * ln m + ln(1/delta)))."""
    if m < 1 or tau < 1:
        raise ConfigError(f"need m >= 1 and tau >= 1, got m={m}, tau={tau}")
    if not 0 < delta <= 0.1:
        raise ConfigError(f"delta must be in (0, 1/10], got {delta}")
    return math.ceil(12.0 * (tau * math.log(m) + math.log(1.0 / delta)))


class RobustSketchTracker:
    """Sketch-median F2 tracker with net-rounded outputs.

    The end-to-end error budget eps splits three ways: net granularity eps/3,
    one-sided sketch error eps/3, realized by internal two-sided error eps/9
    (the (1+e)/(1-e) shift stays within 1+3e for e <= 1/3).  Every emitted
    value lies in {0} union the net points.
    """

    # refuse configurations whose copy bank would not fit in memory
    MAX_BANK_CELLS = 1 << 25

    def __init__(
        self,
        tau: int,
        epsilon: float,
        delta: float,
        m: int,
        alpha: float,
        master_seed: int,
    ):
        if not 0 < epsilon < 1:
            raise ConfigError(f"epsilon must be in (0, 1), got {epsilon}")
        self.epsilon = epsilon
        self.delta = delta
        self.m = m
        self.tau = tau
        self.net = EstimateNet(alpha, epsilon / 3.0)
        self.copies = robust_copies(m, tau, delta)
        self.epsilon_in = epsilon / 9.0
        seeds = [copy_seed(master_seed, i) for i in range(self.copies)]
        bank_cells = self.copies * math.ceil(20.0 / self.epsilon_in**2)
        if bank_cells > self.MAX_BANK_CELLS:
            raise ConfigError(
                f"copy bank needs {bank_cells} counters "
                f"(> {self.MAX_BANK_CELLS}); relax epsilon, delta or m"
            )
        self.bank = SketchBank(self.epsilon_in, seeds)
        self.last_output = 0.0
        self.update_count = 0

    @classmethod
    def for_bounded_memory(
        cls,
        k: int,
        epsilon: float,
        delta: float,
        m: int,
        alpha: float,
        master_seed: int,
    ) -> "RobustSketchTracker":
        """Size the wrapper against a randomized adversary with k persistent
        bits: tau = (net points + 1) * 2^k pre-generatable streams."""
        if not 0 < epsilon < 1:
            raise ConfigError(f"epsilon must be in (0, 1), got {epsilon}")
        net = EstimateNet(alpha, epsilon / 3.0)
        tau = tau_for_bounded_memory(k, net)
        return cls(tau, epsilon, delta, m, alpha, master_seed)

    def step(self, u: Update) -> float:
        if self.update_count >= self.m:
            raise ProtocolError(f"stream longer than declared m={self.m}")
        self.bank.update(u)
        self.update_count += 1
        y = lower_median(self.bank.estimates())
        out = self.net.round_up(y)
        self.last_output = out
        return out


class AmplifiedOblivious:
    """Median of 12 ln(1/delta) sketch copies; oblivious guarantee only."""

    def __init__(self, epsilon: float, delta: float, master_seed: int):
        if not 0 < epsilon < 1:
            raise ConfigError(f"epsilon must be in (0, 1), got {epsilon}")
        self.copies = amplification_copies(delta)
        self.epsilon_in = epsilon / 3.0
        seeds = [copy_seed(master_seed, i) for i in range(self.copies)]
        self.bank = SketchBank(self.epsilon_in, seeds)

    def step(self, u: Update) -> float:
        self.bank.update(u)
        return lower_median(self.bank.estimates())
