"""
SWAP tests and the noisy two-copy purity test.

A SWAP test on ``rho (x) sigma`` accepts with probability ``1/2 + tr(rho sigma)/2``.
The purity test draws either a Haar-random pure state or the maximally mixed
state with equal probability, passes two copies through per-qubit
depolarizing noise, runs ``T`` SWAP tests and calls the state pure when the
acceptance fraction reaches the midpoint of the two predicted acceptance
rates.

For a Haar-random pure state on ``n`` qubits the expected noisy purity is

    E tr(D[psi]^2) = (2^n + (1 + 3(1-lam)^2)^n) / (2^n (2^n + 1))

and for the maximally mixed state it is ``2^-n`` at every noise level.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dense import (MAX_DENSE_QUBITS, DenseState, depolarize, state_haar_pure,
                     state_max_mixed)
from ..errors import CapacityError, DomainError


def _check_pair(n: int) -> None:
    if 2 * n > MAX_DENSE_QUBITS:
        raise CapacityError(f"two copies of {n} qubits exceed the {MAX_DENSE_QUBITS}-qubit dense cap")


def swap_accept_probability(rho: DenseState, sigma: DenseState) -> float:
    if rho.dim != sigma.dim:
        raise ValueError("SWAP test needs states of equal dimension")
    _check_pair(rho.m)
    overlap = float(np.real(np.sum(rho.matrix * sigma.matrix.T)))
    return min(1.0, max(0.0, 0.5 + 0.5 * overlap))


def swap_test(rho: DenseState, sigma: DenseState, rng: np.random.Generator, size: int | None = None):
    """One SWAP test (or ``size`` independent ones); True means accept."""
    p = swap_accept_probability(rho, sigma)
    draws = rng.random(size)
    return draws < p if size is not None else bool(draws < p)


def expected_pure_purity(n: int, lam: float) -> float:
    d = 2**n
    return (d + (1.0 + 3.0 * (1.0 - lam) ** 2) ** n) / (d * (d + 1))


def acceptance_means(n: int, lam: float) -> tuple[float, float]:
    """Predicted acceptance rates ``(pure, mixed)`` for noisy two-copy SWAP tests."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return 0.5 + 0.5 * expected_pure_purity(n, lam), 0.5 + 0.5 * 2.0**-n


@dataclass(frozen=True)
class PurityTrial:
    truth: str  # "pure" or "mixed"
    decision: str
    accept_fraction: float

    @property
    def correct(self) -> bool:
        return self.truth == self.decision


def purity_test_noisy(n: int, lam: float, T: int, rng: np.random.Generator,
                      truth: str | None = None) -> PurityTrial:
    """Decide pure vs mixed from ``T`` SWAP tests on pairs of noisy copies.

    The ground truth is drawn uniformly unless given.
    """
    _check_pair(n)
    if T < 1:
        raise ValueError("T must be positive")
    if truth is None:
        truth = "pure" if rng.random() < 0.5 else "mixed"
    if truth == "pure":
        rho = state_haar_pure(n, rng)
    elif truth == "mixed":
        rho = state_max_mixed(n)
    else:
        raise ValueError(f"truth must be 'pure' or 'mixed', got {truth!r}")
    noisy = depolarize(rho, lam)
    accepts = int(np.count_nonzero(swap_test(noisy, noisy, rng, size=T)))
    hi, lo = acceptance_means(n, lam)
    frac = accepts / T
    decision = "pure" if frac >= 0.5 * (hi + lo) else "mixed"
    return PurityTrial(truth, decision, frac)
