"""Compiled numeric kernels: 4-wise hashing and flip counting.

The sign hashes are degree-3 polynomials over GF(2^61 - 1) with coefficients
expanded counter-mode from a per-copy seed; the sign is the parity of the low
bit of the field value.  Evaluation is batched over (copies x buckets) so a
single call prices one item for an entire bank of sketch copies.

Items must fit in 21 bits (ITEM_MAX): the Horner step splits the accumulator
at bit 41 and multiplies both limbs by the item, which overflows uint64 for
larger points.
"""

from __future__ import annotations

import numpy as np
from numba import njit

P61 = (1 << 61) - 1
ITEM_MAX = (1 << 21) - 1

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def fill_fourwise_coeffs(seeds, bucket_count):
    """Counter-mode coefficient expansion: (copies, buckets, 4) uint64 < P61.

    Coefficient k of copy c is the first 61-bit value below P61 mixed out of
    counter position k of the stream keyed by seeds[c]; rejection re-mixes
    (a single 61-bit pattern, probability 2^-61, is invalid).
    """
    t = seeds.shape[0]
    p = np.uint64(P61)
    out = np.empty((t, bucket_count, 4), dtype=np.uint64)
    for c in range(t):
        base = seeds[c]
        k = np.uint64(0)
        for b in range(bucket_count):
            for j in range(4):
                state = base + k * _GOLDEN
                v = _mix64(state) & p
                while v == p:
                    state = state + np.uint64(0x632BE59BD9B4E019)
                    v = _mix64(state) & p
                out[c, b, j] = v
                k += np.uint64(1)
    return out


@njit(cache=True)
def sign_column(coeffs, item, out):
    """Evaluate the sign hash of `item` for every (copy, bucket) into `out`.

    coeffs: (copies, buckets, 4) uint64 field elements, highest degree first.
    out: (copies, buckets) int8 receiving +1/-1.
    Requires 1 <= item <= ITEM_MAX.
    """
    p = np.uint64(P61)
    m41 = np.uint64((1 << 41) - 1)
    m20 = np.uint64((1 << 20) - 1)
    x = np.uint64(item)
    t, nb = out.shape
    for c in range(t):
        for b in range(nb):
            r = coeffs[c, b, 0]
            for j in range(1, 4):
                hi = (r >> np.uint64(41)) * x
                lo = (r & m41) * x
                r = (hi >> np.uint64(20)) + ((hi & m20) << np.uint64(41)) + lo
                r = (r >> np.uint64(61)) + (r & p)
                r += coeffs[c, b, j]
            r = (r >> np.uint64(61)) + (r & p)
            r = (r >> np.uint64(61)) + (r & p)
            if r >= p:
                r -= p
            out[c, b] = np.int8(1) if r & np.uint64(1) else np.int8(-1)


@njit(cache=True)
def copy_dot(a, b):
    """Per-copy inner product of two (copies, buckets) int8 sign matrices."""
    t, nb = a.shape
    out = np.empty(t, dtype=np.int64)
    for c in range(t):
        s = 0
        for i in range(nb):
            s += np.int64(a[c, i]) * np.int64(b[c, i])
        out[c] = s
    return out


@njit(cache=True)
def flip_count(values, eps):
    """Maximum length of an index chain whose consecutive chosen values
    jump outside the closed relative band [(1-eps)x, (1+eps)x].

    Exact maximum over all subsequences.  Dynamic program over chain lengths:
    removing the first element of a valid chain leaves a valid chain, so any
    ending value achievable at length L is achievable at every shorter
    length; extendability of length L by a new value x therefore depends only
    on the suffix min/max of recorded ending values over lengths >= L.  Two
    segment trees give O(n log^2 F) total time for flip number F.
    """
    n = values.shape[0]
    size = 1
    while size < n + 1:
        size *= 2
    tmin = np.full(2 * size, np.inf)
    tmax = np.full(2 * size, -np.inf)
    best = 0
    for idx in range(n):
        x = values[idx]
        a = (1.0 - eps) * x
        b = (1.0 + eps) * x
        # binary search the largest extendable length in [1, best]
        lo = 1
        hi = best
        newlen = 1
        while lo <= hi:
            mid = (lo + hi) // 2
            # range min/max over leaves [mid, best]
            l = mid + size
            r = best + size
            mn = np.inf
            mx = -np.inf
            while l <= r:
                if l & 1:
                    if tmin[l] < mn:
                        mn = tmin[l]
                    if tmax[l] > mx:
                        mx = tmax[l]
                    l += 1
                if not (r & 1):
                    if tmin[r] < mn:
                        mn = tmin[r]
                    if tmax[r] > mx:
                        mx = tmax[r]
                    r -= 1
                l //= 2
                r //= 2
            if mn < a or mx > b:
                newlen = mid + 1
                lo = mid + 1
            else:
                hi = mid - 1
        pos = newlen + size
        if x < tmin[pos]:
            tmin[pos] = x
            pos2 = pos // 2
            while pos2 >= 1:
                if x < tmin[pos2]:
                    tmin[pos2] = x
                pos2 //= 2
        if x > tmax[pos]:
            tmax[pos] = x
            pos2 = pos // 2
            while pos2 >= 1:
                if x > tmax[pos2]:
                    tmax[pos2] = x
                pos2 //= 2
        if newlen > best:
            best = newlen
    return best
