"""
Telling pure from mixed with SWAP tests
=======================================

A SWAP test on two copies accepts with probability (1 + tr(rho^2)) / 2.
Depolarizing both copies first pulls the pure-state purity down toward
the mixed one, so the same number of tests buys less and less.
"""
import numpy as np

from noisylearn.protocols import acceptance_means, purity_test_noisy

rng = np.random.default_rng(11)
n, T = 3, 20

# %%
print("lam   accept(pure)  accept(mixed)  gap")
for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
    hi, lo = acceptance_means(n, lam)
    print(f"{lam:4.2f}  {hi:12.4f}  {lo:13.4f}  {hi - lo:.4f}")

# %%
# Success of the midpoint rule at a fixed T.
print()
for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
    wins = np.mean([purity_test_noisy(n, lam, T, rng).correct for _ in range(1000)])
    print(f"lam={lam:4.2f}: {wins:.3f}")
