"""Self-check suites behind the `validate` CLI subcommand.

Quick, seeded versions of the library's load-bearing invariants: net
rounding soundness, sketch order invariance, and median amplification.  Each
check returns (name, passed, detail); the CLI prints one line per check.
"""

from __future__ import annotations

import math

import numpy as np

from .adversaries import uniform_stream
from .net import EstimateNet
from .oblivious import AmsSketch
from .seeding import FreshRand, child_seed


def check_net(samples: int = 20000, seed: int = 7) -> tuple[str, bool, str]:
    rng = np.random.default_rng(seed)
    for alpha in (100.0, 1e4, 1e8):
        for eps in (0.01, 0.1, 0.5):
            net = EstimateNet(alpha, eps)
            bound = 2 + math.ceil(math.log(alpha) / math.log(1.0 + eps))
            if len(net.points) + 1 > bound:
                return "net", False, f"size {len(net.points)} over bound at ({alpha}, {eps})"
            xs = np.exp(rng.uniform(0.0, math.log(alpha), size=samples))
            for x in xs:
                y = net.round_up(float(x))
                if not x <= y <= (1.0 + eps) * x:
                    return "net", False, f"unsound rounding of {x} at ({alpha}, {eps})"
                if net.round_up(y) != y:
                    return "net", False, f"rounding not idempotent at {x}"
    return "net", True, "sound, sized and idempotent on all sampled points"

def check_order_invariance(
    streams: int = 20, perms: int = 3, seed: int = 11
) -> tuple[str, bool, str]:
    rng = np.random.default_rng(seed)
    for s in range(streams):
        stream = uniform_stream(64, int(rng.integers(1, 200)), seed * 1000 + s,
                                delete_prob=0.3)
        sketch_seed = child_seed(seed, f"sketch-{s}")
        base = AmsSketch(0.5, sketch_seed)
        for u in stream:
            base.update(u)
        for _ in range(perms):
            other = AmsSketch(0.5, sketch_seed)
            for idx in rng.permutation(len(stream)):
                other.update(stream[int(idx)])
            if not np.array_equal(base.accumulators, other.accumulators):
                return "order-invariance", False, f"state differs on stream {s}"
    return "order-invariance", True, f"{streams} streams x {perms} permutations bit-identical"


def check_amplification(trials: int = 2000, seed: int = 13) -> tuple[str, bool, str]:
    copies, fail_p = 36, 0.1
    tail = sum(
        math.comb(copies, j) * fail_p**j * (1 - fail_p) ** (copies - j)
        for j in range(copies // 2, copies + 1)
    )
    rand = FreshRand(seed, 0)
    failures = 0
    for _ in range(trials):
        bad = sum(1 for _ in range(copies) if rand.u64() < fail_p * 2**64)
        if bad >= copies // 2:
            failures += 1
    ok = failures == 0 and tail < 1e-7
    return (
        "amplification",
        ok,
        f"{failures} median failures in {trials} trials; exact tail {tail:.3g}",
    )


ALL_CHECKS = (check_net, check_order_invariance, check_amplification)


def run_all() -> list[tuple[str, bool, str]]:
    return [check() for check in ALL_CHECKS]
