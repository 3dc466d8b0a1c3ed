"""
Classical shadows when the device is noisy
==========================================

Random single-qubit rotations followed by a computational-basis readout
give an unbiased estimate of any Pauli expectation, once each site is
rescaled by the right factor. Noise before and after the rotation shrinks
that factor from 1/3 to (1 - lam)^2 / 3 per site.
"""
import numpy as np

from noisylearn.bell import MAX_MIXED
from noisylearn.pauli import PauliString
from noisylearn.protocols import channel_eigenvalue, shadow_collect, shadow_estimate, shadow_weight

rng = np.random.default_rng(3)

# %%
# Measured shrink factor against the closed form.
p = PauliString.from_label("XY")
for lam in (0.0, 0.1, 0.3):
    data = shadow_collect(p, 2, lam, 50_000, rng)
    mean, se = channel_eigenvalue(data, p)
    print(f"lam={lam}: measured {mean:.4f} +- {se:.4f}, predicted {shadow_weight(p, lam):.4f}")

# %%
# Rescaling with the calibrated noise level gives back tr(P rho) = 1;
# pretending the device is clean under-reports it.
data = shadow_collect(p, 2, 0.2, 50_000, rng)
print(f"\ncalibrated: {shadow_estimate(data, p, 0.2).value:.3f}")
print(f"assuming no noise: {shadow_estimate(data, p, 0.2, lam_assumed=0.0).value:.3f}")

# %%
# On the maximally mixed state every non-trivial Pauli averages to zero.
flat = shadow_collect(MAX_MIXED, 4, 0.1, 50_000, rng)
for label in ("ZIII", "XYIZ"):
    q = PauliString.from_label(label)
    print(f"{label}: {shadow_estimate(flat, q, 0.1).value:+.3f}")
