"""
Two-copy Pauli identification from noisy Bell samples.

Given ``T`` Bell outcomes, every non-identity Pauli ``Q`` gets the statistic

    Z_Q = (1/T) sum_s (-1)^{<s,q>}

and the hypothesis ``H1`` is declared when ``max_Q |Z_Q|`` reaches
``(1-lam)^{2n} / 2``. The maximizer is reported as the identified Pauli.

All ``4^n - 1`` statistics are obtained at once from a Walsh-Hadamard
transform of the outcome histogram, since ``<s,q>`` is the ordinary dot
product of ``s`` with ``q`` after exchanging its x and z halves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..bell import MAX_MIXED, BellSample, sample_bell_batch
from ..errors import CapacityError, DomainError
from ..pauli import ENUMERATION_CAP, PauliString, random_pauli

DEFAULT_C = 8.0


@dataclass(frozen=True)
class PauliIdentResult:
    decision: str  # "H0" or "H1"
    argmax_pauli: PauliString | None
    z_max: float
    threshold: float
    samples_used: int


def required_samples_ident(n: int, lam: float, C: float = DEFAULT_C) -> int:
    """Sample budget ``ceil(C n (1-lam)^{-4n})``."""
    if not 0.0 <= lam < 1.0:
        raise DomainError(f"lambda must lie in [0, 1) for a finite budget, got {lam}")
    if C <= 0:
        raise DomainError("C must be positive")
    # round away float fuzz before the ceiling so exact integers stay exact
    return math.ceil(round(C * n * (1.0 - lam) ** (-4 * n), 9))


def threshold(n: int, lam: float) -> float:
    return 0.5 * (1.0 - lam) ** (2 * n)


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform ``W[v] = sum_s a[s] (-1)^{popcount(s & v)}``."""
    a = np.array(a, copy=True)
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        a = np.concatenate((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1)
        h *= 2
    return a.reshape(n)


def _as_arrays(samples, n: int) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, tuple) and len(samples) == 2 and isinstance(samples[0], np.ndarray):
        return np.asarray(samples[0], dtype=np.uint64), np.asarray(samples[1], dtype=np.uint64)
    items = list(samples)
    for s in items:
        if s.n != n:
            raise ValueError(f"sample on {s.n} qubits in an n={n} stream")
    sx = np.array([s.x for s in items], dtype=np.uint64)
    sz = np.array([s.z for s in items], dtype=np.uint64)
    return sx, sz


def z_statistics(samples, n: int) -> np.ndarray:
    """Integer sums ``T * Z_Q`` for every code ``q = (x << n) | z`` (index 0 is the identity)."""
    sx, sz = _as_arrays(samples, n)
    codes = (sx.astype(np.int64) << n) | sz.astype(np.int64)
    hist = np.bincount(codes, minlength=4**n).astype(np.int64)
    w = fwht(hist)
    q = np.arange(4**n)
    mask = (1 << n) - 1
    flipped = ((q & mask) << n) | (q >> n)
    return w[flipped]


def identify_pauli(samples: tuple[np.ndarray, np.ndarray] | Iterable[BellSample], n: int,
                   lam: float, T: int | None = None) -> PauliIdentResult:
    """Run the classical post-processing on a stream of Bell outcomes.

    ``samples`` is either a pair of uint64 arrays ``(x, z)`` or an iterable
    of :class:`BellSample`. If ``T`` is given only the first ``T`` samples are
    used. Ties in ``|Z_Q|`` resolve to the smallest code.
    """
    if n > ENUMERATION_CAP:
        raise CapacityError(f"post-processing enumerates 4^{n} Paulis; cap is n <= {ENUMERATION_CAP}")
    sx, sz = _as_arrays(samples, n)
    if T is not None:
        sx, sz = sx[:T], sz[:T]
    used = int(sx.size)
    if used == 0:
        raise ValueError("empty sample stream")
    sums = np.abs(z_statistics((sx, sz), n))
    sums[0] = -1
    best = int(np.argmax(sums))
    z_max = sums[best] / used
    tau = threshold(n, lam)
    if z_max >= tau:
        return PauliIdentResult("H1", PauliString.from_code(n, best), float(z_max), tau, used)
    return PauliIdentResult("H0", None, float(z_max), tau, used)


def identify_pauli_streaming(samples: Iterable[BellSample], n: int, lam: float) -> PauliIdentResult:
    """Reference implementation with one running accumulator per Pauli."""
    if n > ENUMERATION_CAP:
        raise CapacityError(f"post-processing enumerates 4^{n} Paulis; cap is n <= {ENUMERATION_CAP}")
    acc = np.zeros(4**n, dtype=np.int64)
    q = np.arange(4**n, dtype=np.int64)
    mask = (1 << n) - 1
    qx, qz = q >> n, q & mask
    used = 0
    for s in samples:
        par = np.bitwise_count((s.x & qz) ^ (s.z & qx)) & 1
        acc += 1 - 2 * par.astype(np.int64)
        used += 1
    if used == 0:
        raise ValueError("empty sample stream")
    mags = np.abs(acc)
    mags[0] = -1
    best = int(np.argmax(mags))
    z_max = mags[best] / used
    tau = threshold(n, lam)
    if z_max >= tau:
        return PauliIdentResult("H1", PauliString.from_code(n, best), float(z_max), tau, used)
    return PauliIdentResult("H0", None, float(z_max), tau, used)


@dataclass(frozen=True)
class DecIPTrial:
    ground_truth: str
    pauli: PauliString | None
    result: PauliIdentResult

    @property
    def correct(self) -> bool:
        """Right hypothesis, and for H1 also the right Pauli."""
        if self.ground_truth == "H0":
            return self.result.decision == "H0"
        return self.result.decision == "H1" and self.result.argmax_pauli == self.pauli


def run_dec_ip_trial(n: int, lam: float, T: int, ground_truth: str, rng: np.random.Generator) -> DecIPTrial:
    """One Dec-IP instance: draw the state, collect ``T`` Bell samples, decide."""
    if ground_truth == "H1":
        p = random_pauli(n, include_identity=False, rng=rng)
        samples = sample_bell_batch(p, lam, T, rng)
    elif ground_truth == "H0":
        p = None
        samples = sample_bell_batch(MAX_MIXED, lam, T, rng, n=n)
    else:
        raise ValueError(f"ground truth must be 'H0' or 'H1', got {ground_truth!r}")
    return DecIPTrial(ground_truth, p, identify_pauli(samples, n, lam))
