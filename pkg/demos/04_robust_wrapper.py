"""The sketch-median wrapper holds up under the memoryless attack.

The wrapper's sizing chain: round outputs onto a net of granularity eps/3;
a randomized adversary with k persistent bits then has only
(net points + 1) * 2^k distinguishable input states, so it behaves like an
interleaver of tau pre-generated streams; a union bound over the m^tau
prefix selections fixes the number of independent sketch copies whose lower
median we emit.  The price is copies; the payoff is a tracking guarantee
that survives full adaptivity (the amplified-oblivious baseline carries no
such guarantee, however well it happens to do empirically).
"""

import numpy as np

from advstream import GameConfig, run_game, run_trials
from advstream.robust import RobustSketchTracker

EPS, DELTA, M, N, C = 0.9, 0.05, 500, 1024, 0.3

wrapper = RobustSketchTracker.for_bounded_memory(
    k=0, epsilon=EPS, delta=DELTA, m=M, alpha=float(M) ** 2, master_seed=0
)
print("=== sizing (k=0, eps=0.9, delta=0.05, m=500, alpha=m^2) ===")
print(f"net granularity eps/3 = {wrapper.net.epsilon}")
print(f"net points            = {len(wrapper.net.points)}")
print(f"tau (input states)    = {wrapper.tau}")
print(f"sketch copies         = {wrapper.copies}")
print(f"buckets per copy      = {wrapper.bank.bucket_count} (internal eps = eps/9)")

print("\n=== one attacked game, round by round (first 8 rounds) ===")
cfg = GameConfig(m=M, n=N, epsilon=EPS, delta=DELTA, algorithm="robust",
                 adversary="memoryless", c=C, master_seed=42)
t = run_game(cfg)
for j in range(8):
    print(
        f"round {j + 1}: update ({int(t.items[j])}, {int(t.deltas[j]):+d})  "
        f"true F2 = {t.true_values[j]:<6g} estimate = {t.estimates[j]:.6g}"
    )
print(f"... success over all {M} rounds: {t.success}")
print(f"distinct estimates emitted: {len(set(t.estimates.tolist()))} "
      f"(all from the {len(wrapper.net.points)}-point net, plus 0)")

print("\n=== 40 seeded attacked games each ===")
for algorithm in ("robust", "oblivious-amplified"):
    rows = run_trials(
        GameConfig(m=M, n=N, epsilon=EPS, delta=DELTA, algorithm=algorithm,
                   adversary="memoryless", c=C, master_seed=7),
        trials=40,
    )
    frac = float(np.mean([r["success"] for r in rows]))
    print(f"{algorithm:<21} fully-correct fraction: {frac:.3f}")
print("(the wrapper's 1 - delta guarantee covers adaptive adversaries; the")
print(" baseline's covers only a fixed stream)")
