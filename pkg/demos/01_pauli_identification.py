"""
Finding a hidden Pauli from noisy Bell samples
==============================================

Two copies of ``(1 + P) / 2^n`` pass through depolarizing noise and are
measured in the Bell basis. Each outcome is a Pauli ``S`` that tends to
commute (up to the phase of ``P``) with the hidden ``P``; averaging the
signs over many shots and taking the loudest one recovers ``P``.
"""
import numpy as np

from noisylearn.bell import MAX_MIXED, bell_distribution, sample_bell_batch
from noisylearn.pauli import PauliString
from noisylearn.protocols import identify_pauli, required_samples_ident

rng = np.random.default_rng(7)

# %%
# The outcome law is flat except for a bump on half of the Paulis.
p = PauliString.from_label("XZY")
for lam in (0.0, 0.1, 0.3):
    dist = bell_distribution(p, lam, p.n)
    print(f"lam={lam:.1f}  largest outcome prob {dist.max():.4f}  smallest {dist.min():.4f}  (flat = {1 / 64:.4f})")

# %%
# With the default budget the argmax is almost always the hidden Pauli.
lam = 0.1
T = required_samples_ident(p.n, lam)
result = identify_pauli(sample_bell_batch(p, lam, T, rng), p.n, lam)
print(f"\nT = {T}: decision {result.decision}, argmax {result.argmax_pauli}, "
      f"z_max {result.z_max:.3f} vs threshold {result.threshold:.3f}")

# %%
# Feed it the maximally mixed state instead. The loudest of 63 noisy
# averages often clears the threshold anyway, which is the false-alarm
# problem at this budget.
alarms = 0
for _ in range(200):
    res = identify_pauli(sample_bell_batch(MAX_MIXED, lam, T, rng, n=3), 3, lam)
    alarms += res.decision == "H1"
print(f"maximally mixed input: called H1 in {alarms / 200:.2f} of 200 runs")

# %%
# The budget grows like (1 - lam)^(-4n).
for n in (2, 4, 6, 8):
    print(f"n={n}: " + ", ".join(f"lam={lam}: {required_samples_ident(n, lam)}" for lam in (0.0, 0.05, 0.1, 0.2)))
