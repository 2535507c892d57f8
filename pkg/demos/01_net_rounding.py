"""Multiplicative estimate nets: a handful of grid points cover [1, alpha].

Every estimate the defenders emit is first rounded up onto this grid (or to
0, below 1), so an adversary watching the outputs only ever sees a small
vocabulary of values.
"""

import math

import numpy as np

from advstream import build_net

print("=== grid sizes ===")
for alpha in (1e2, 1e4, 1e8):
    for eps in (0.5, 0.1, 0.01):
        net = build_net(alpha, eps)
        bound = 2 + math.ceil(math.log(alpha) / math.log(1 + eps))
        print(
            f"alpha=10^{int(math.log10(alpha))} eps={eps:<5} -> "
            f"{len(net.points):5d} points (bound {bound})"
        )

net = build_net(1e4, 0.3)
print("\n=== rounding on a (alpha=10^4, eps=0.3) net ===")
for y in (0.0, 0.17, 1.0, 1.05, 2.0, 7.3, 9999.0, 123456.0):
    print(f"round_up({y:>9}) = {net.round_up(y):.6g}")

print("\n=== the one-sided guarantee, sampled ===")
rng = np.random.default_rng(1)
worst = 1.0
for x in np.exp(rng.uniform(0, math.log(net.alpha), size=100_000)):
    y = net.round_up(float(x))
    assert x <= y <= (1 + net.epsilon) * x
    worst = max(worst, y / x)
print(f"100000 samples: x <= round_up(x) <= (1+eps)x held; worst ratio {worst:.4f}")
print(f"(1 + eps = {1 + net.epsilon})")
