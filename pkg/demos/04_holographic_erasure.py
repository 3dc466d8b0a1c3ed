"""
Recovering the bulk of a small holographic code
===============================================

A hexagonal tiling of six-leg perfect tensors, grown ring by ring. Erase
boundary legs at random, push the surviving information inward with a
greedy rule (three known legs fix the other three), then ask whether two
independently eroded copies still let a SWAP test see that the bulk state
is pure.
"""
import numpy as np

from noisylearn.happy import (black_hole_experiment, build_tiling, bulk_leg_count, decode_failure_rate,
                              failure_bound, tile_counts)

rng = np.random.default_rng(5)

# %%
for k in range(1, 6):
    x, y = tile_counts(k)
    print(f"ring {k}: {x} one-parent tiles, {y} two-parent tiles; {5 * x + 4 * y} legs leave the ring")
print("legs around the inner disc:", [bulk_leg_count(r) for r in range(4)])

# %%
tiling = build_tiling(4)
print()
for rate in (1 / 60, 1 / 48, 0.05, 0.1, 0.2):
    fail = decode_failure_rate(tiling, 1, rate, 10_000, rng)
    print(f"erasure rate {rate:.4f}: decode failure {fail:.4f}, bound {failure_bound(1, 4, rate):.4f}")

# %%
print()
for rate in (0.0, 1 / 60, 0.2, 0.5):
    rep = black_hole_experiment(4, 1, rate, 10_000, rng)
    print(f"erasure rate {rate:.4f}: purity call correct {rep.success_rate:.3f}")
