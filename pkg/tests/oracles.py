"""Independent reference implementations used only by the tests.

These deliberately avoid the library's code paths: the flip-number oracle is
a quadratic dynamic program over all subsequences (itself cross-checked
against literal enumeration of every subsequence on tiny inputs), and the
moment/density oracles recompute from scratch.
"""

from itertools import combinations


def flip_dp(seq, eps):
    """Exact maximum chain length by O(n^2) DP over all subsequences."""
    n = len(seq)
    if n == 0:
        raise ValueError("empty sequence")
    best = [1] * n
    for i in range(n):
        lo = (1.0 - eps) * seq[i]
        hi = (1.0 + eps) * seq[i]
        for j in range(i):
            if (seq[j] < lo or seq[j] > hi) and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    return max(best)


def flip_enumerate(seq, eps):
    """Literal maximum over every subsequence; exponential, tiny inputs only."""
    n = len(seq)
    best = 1
    for k in range(2, n + 1):
        for idx in combinations(range(n), k):
            ok = True
            for a, b in zip(idx, idx[1:]):
                lo = (1.0 - eps) * seq[b]
                hi = (1.0 + eps) * seq[b]
                if not (seq[a] < lo or seq[a] > hi):
                    ok = False
                    break
            if ok:
                best = k
                break
    return best


def moment_from_updates(updates, p):
    """F_p of a raw update list, recomputed from scratch."""
    freqs = {}
    for item, delta in updates:
        freqs[item] = freqs.get(item, 0) + delta
    return float(sum(abs(f) ** p for f in freqs.values() if f != 0))


def density_from_updates(updates):
    freqs = {}
    for item, delta in updates:
        freqs[item] = freqs.get(item, 0) + delta
    return sum(1 for f in freqs.values() if f != 0)
