"""Deterministic seed derivation and per-round fresh randomness.

Everything in the arena is driven by a single 64-bit master seed.  The master
seed fans out into independent sub-seeds for the algorithm, the adversary and
the referee via label hashing, so the three parties never share randomness.
Per-round adversary randomness is a counter-mode stream keyed by
(sub-seed, round index): the draws are fresh every round, are not retained,
and yet the whole game replays bit-identically from the master seed.
"""

from __future__ import annotations

import hashlib

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 finalizer: a bijective 64-bit avalanche mix."""
    z &= _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def child_seed(master_seed: int, label: str) -> int:
    """Derive an independent 64-bit sub-seed from (master seed, fixed label)."""
    h = hashlib.blake2b(digest_size=8)
    h.update(label.encode("utf-8"))
    h.update((master_seed & _MASK64).to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


def copy_seed(master_seed: int, index: int) -> int:
    """Seed for the index-th sketch copy: master XOR a splitmix expansion."""
    return (master_seed ^ mix64((index + 1) * _GOLDEN)) & _MASK64


class FreshRand:
    """Per-round read-only randomness source.

    A counter-mode splitmix64 stream keyed by (seed, round).  A new key is
    installed each round via :meth:`reset`; nothing drawn in one round is
    visible in the next, matching the fresh-randomness contract of the game.
    """

    __slots__ = ("_seed", "_state")

    def __init__(self, seed: int, round_index: int = 0):
        self._seed = seed & _MASK64
        self._state = 0
        self.reset(round_index)

    def reset(self, round_index: int) -> None:
        self._state = (self._seed + round_index * _GOLDEN) & _MASK64

    def u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n). Multiply-shift; bias is O(2^-64)."""
        return (self.u64() * n) >> 64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def coin(self) -> int:
        """Fair bit in {0, 1}."""
        return self.u64() & 1
