"""The stream-interleaving adversary: full memory, pre-committed updates.

This adversary fixes its first update and tau complete streams before the
game, then adaptively picks which stream to pop each round (here: greedily
chasing the largest gap between true F2 and the last estimate).  With the
copy count set for tau streams, the sketch median tracks it reliably.
"""

import numpy as np

from advstream import GameConfig, TauStreamAdversary, Update, run_game, uniform_stream
from advstream.robust import RobustSketchTracker, robust_copies

M, N, TAU = 200, 64, 3

print(f"=== copies needed: m={M}, delta=0.1 ===")
for tau in (1, 2, 3, 5, 10):
    print(f"tau={tau:>2} -> {robust_copies(M, tau, 0.1):>4} copies")

print(f"\n=== greedy interleaver (tau={TAU}) vs tau-sized wrapper ===")
cfg = GameConfig(m=M, n=N, epsilon=0.9, delta=0.1, algorithm="robust",
                 adversary="taustream", tau=TAU, policy="greedy", master_seed=5)
t = run_game(cfg)
print(f"success: {t.success}  flip number: {t.flip_number}  "
      f"peak density: {int(t.densities.max())}")

print("\n=== the pre-commitment is real: exactly m-1 pops ===")
streams = [uniform_stream(N, M - 1, seed=s, delete_prob=0.2) for s in (1, 2, 3)]
adv = TauStreamAdversary(Update(1, 1), streams, policy="round_robin")
wrapper = RobustSketchTracker(TAU, 0.9, 0.1, M, float(M) ** 2, master_seed=9)
estimate = None
state = adv.initial_state
for j in range(M):
    u, state = adv.next(estimate, state, None)
    estimate = wrapper.step(u)
remaining = sum(len(q) for q in adv.queues)
print(f"updates left across queues: {remaining} "
      f"(started with {TAU * (M - 1)}, popped {TAU * (M - 1) - remaining})")
print(f"wrapper's last output: {wrapper.last_output:.6g}")
