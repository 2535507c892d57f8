"""Adversaries under the bounded-memory round contract.

Every adversary is a stateless rule ``next(estimate, persistent, rand)``
returning the round's update and the new persistent state.  The engine owns
the persistent state and the per-round randomness, so nothing beyond the
declared bits can leak between rounds; round 1 passes ``estimate=None``.

The two attackers drive F2 by interleaving density-building insertions of
fresh random items (Type I) with oscillations of the single heavy item 1:

* :class:`OneBitAttacker` keeps a one-bit up/down direction and rides the
  estimate between thresholds T1..T3, flipping direction at the rails.
* :class:`MemorylessAttacker` keeps nothing and replaces the directed ramp
  with an unbiased random walk on item 1 inside the band [T2, T4).

Thresholds are T1 = ceil(m^c), T_j = (1+eps)^(j-1) * T1.  Both need a
universe n > 10 * m^(2c) so the Type I items are distinct with probability
at least 19/20 (birthday bound).

:class:`TauStreamAdversary` is the pre-commitment model: it fixes its first
update and tau full streams up front, then adaptively interleaves them; it
alone may keep unbounded state (``k is None``).
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import ConfigError, ProtocolError, Update, ceil_power
from .seeding import FreshRand

UP = "UP"
DOWN = "DOWN"


@dataclass(frozen=True)
class AttackerParams:
    """Shared attacker geometry: stream length, exponent, band thresholds."""

    m: int
    c: float
    epsilon: float
    n: int

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise ConfigError(f"exponent c must be in (0, 1), got {self.c}")
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        bound = 10.0 * float(self.m) ** (2.0 * self.c)
        if self.n <= bound:
            raise ConfigError(
                f"universe n={self.n} too small: need n > 10*m^(2c) = {bound:.1f}"
            )

    @property
    def t1(self) -> float:
        return float(ceil_power(self.m, self.c))

    @property
    def t2(self) -> float:
        return (1.0 + self.epsilon) * self.t1

    @property
    def t3(self) -> float:
        return (1.0 + self.epsilon) ** 3 * self.t1

    @property
    def t4(self) -> float:
        return (1.0 + self.epsilon) ** 4 * self.t1


class OneBitAttacker:
    """Directed F2 attacker with one persistent bit (up/down)."""

    k = 1

    def __init__(self, params: AttackerParams):
        self.params = params
        self.initial_state = UP

    def next(self, estimate: Optional[float], state: str, rand: FreshRand):
        p = self.params
        if estimate is None or estimate < p.t1:
            # Type I: grow density with a fresh uniform item from {2..n}
            return Update(2 + rand.below(p.n - 1), 1), UP
        if estimate < p.t2:
            # Type II: push the heavy item up
            return Update(1, 1), UP
        if estimate >= p.t3:
            return Update(1, -1), DOWN
        # follow the sign inside [T2, T3)
        if state == UP:
            return Update(1, 1), UP
        return Update(1, -1), DOWN


class MemorylessAttacker:
    """Zero-memory F2 attacker: random walk on item 1 inside [T2, T4)."""

    k = 0

    def __init__(self, params: AttackerParams):
        if params.c >= 0.5:
            raise ConfigError(
                f"memoryless attacker needs c < 1/2, got c={params.c}"
            )
        self.params = params
        self.initial_state = None

    def next(self, estimate: Optional[float], state, rand: FreshRand):
        p = self.params
        if estimate is None or estimate < p.t1:
            return Update(2 + rand.below(p.n - 1), 1), None
        if estimate < p.t2:
            return Update(1, 1), None
        if estimate >= p.t4:
            return Update(1, -1), None
        return Update(1, 1 if rand.coin() else -1), None


class ToggleAdversary:
    """Deterministic echo: insert item 1 on estimate 0, delete it otherwise."""

    k = 0

    def __init__(self, n: int = 1):
        self.n = n
        self.initial_state = None

    def next(self, estimate: Optional[float], state, rand):
        if estimate is None or estimate == 0:
            return Update(1, 1), None
        return Update(1, -1), None


class EstimateHashAdversary:
    """Deterministic memoryless probe: item and sign from a stable hash of
    the last estimate, so each distinct estimate maps to one fixed update."""

    k = 0

    def __init__(self, n: int):
        if n < 2:
            raise ConfigError(f"estimate-hash adversary needs n >= 2, got {n}")
        self.n = n
        self.initial_state = None

    def _digest(self, estimate: Optional[float]) -> int:
        token = "-" if estimate is None else format(estimate, ".17g")
        h = hashlib.blake2b(token.encode("ascii"), digest_size=8)
        return int.from_bytes(h.digest(), "little")

    def next(self, estimate: Optional[float], state, rand):
        h = self._digest(estimate)
        item = 2 + (h >> 1) % (self.n - 1)
        delta = 1 if h & 1 == 0 else -1
        return Update(item, delta), None


class ObliviousReplayer:
    """Replays a pre-committed stream, ignoring every estimate.

    The position counter is round bookkeeping, not adaptive memory; this is
    the zero-adaptivity baseline rather than a bounded-memory player.
    """

    k = None

    def __init__(self, stream: Sequence[Update]):
        if not stream:
            raise ConfigError("replayer needs a nonempty stream")
        self.stream = list(stream)
        self.initial_state = None
        self._pos = 0

    def next(self, estimate, state, rand):
        if self._pos >= len(self.stream):
            raise ProtocolError("replay stream exhausted")
        u = self.stream[self._pos]
        self._pos += 1
        return u, None


class TauStreamAdversary:
    """Pre-commits a first update plus tau streams and interleaves them.

    Policies: "round_robin" cycles the queues; "greedy" tracks the true
    frequency vector from its own emitted updates (unbounded memory is this
    adversary's privilege) and pops the head that pushes true F2 farthest
    from the last estimate.
    """

    k = None  # unbounded persistent memory

    def __init__(
        self,
        first_update: Update,
        streams: Sequence[Sequence[Update]],
        policy: str = "round_robin",
    ):
        if not streams:
            raise ConfigError("need at least one pre-generated stream")
        if policy not in ("round_robin", "greedy"):
            raise ConfigError(f"unknown policy {policy!r}")
        self.first_update = first_update
        self.queues = [deque(s) for s in streams]
        self.tau = len(self.queues)
        self.policy = policy
        self.initial_state = None
        self._rr = 0
        self._freqs: dict[int, int] = {}
        self._f2 = 0
        self._started = False

    def _account(self, u: Update) -> None:
        old = self._freqs.get(u.item, 0)
        new = old + u.delta
        self._f2 += new * new - old * old
        if new == 0:
            self._freqs.pop(u.item, None)
        else:
            self._freqs[u.item] = new

    def _pick_round_robin(self) -> int:
        for off in range(self.tau):
            i = (self._rr + off) % self.tau
            if self.queues[i]:
                self._rr = (i + 1) % self.tau
                return i
        raise ProtocolError("all pre-generated streams exhausted")

    def _pick_greedy(self, estimate: float) -> int:
        best_i = -1
        best_gap = -1.0
        for i, q in enumerate(self.queues):
            if not q:
                continue
            u = q[0]
            old = self._freqs.get(u.item, 0)
            new = old + u.delta
            cand = self._f2 + new * new - old * old
            gap = abs(cand - estimate)
            if gap > best_gap:
                best_gap = gap
                best_i = i
        if best_i < 0:
            raise ProtocolError("all pre-generated streams exhausted")
        return best_i

    def next(self, estimate: Optional[float], state, rand):
        if estimate is None and not self._started:
            self._started = True
            self._account(self.first_update)
            return self.first_update, None
        if self.policy == "round_robin":
            i = self._pick_round_robin()
        else:
            i = self._pick_greedy(0.0 if estimate is None else estimate)
        u = self.queues[i].popleft()
        self._account(u)
        return u, None


def uniform_stream(
    n: int, length: int, seed: int, delete_prob: float = 0.0
) -> list[Update]:
    """Oblivious stream of uniform items; optional deletion probability."""
    rand = FreshRand(seed, 0)
    out = []
    for _ in range(length):
        item = 1 + rand.below(n)
        delta = 1
        if delete_prob > 0 and rand.u64() < delete_prob * 2**64:
            delta = -1
        out.append(Update(item, delta))
    return out
