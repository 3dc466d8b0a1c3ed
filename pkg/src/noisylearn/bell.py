"""
Exact outcome law and sampler for noisy two-copy Bell measurements.

For ``rho = (1 + P)/2^n`` with per-qubit depolarizing noise of strength
``lam`` applied to both copies, the Bell outcome ``s`` in F2^{2n} has

    Pr[s] = 4^{-n} (1 + (1-lam)^{2|P|} (-1)^{<s,p> + <p>})

and under the maximally mixed hypothesis it is uniform. The phase bit
``<p>`` (number of Y factors mod 2) decides which coset is favoured: with
no noise every outcome satisfies ``<s,p> = <p>``. The two cosets each hold
half of F2^{2n}, so sampling reduces to a biased coin followed by a uniform
draw inside a coset. This works at any ``n`` up to the 63-qubit word limit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .pauli import MAX_QUBITS, PauliString, parity, phase_form


class MaxMixed:
    """Marker for the maximally mixed hypothesis (H0)."""

    def __repr__(self) -> str:
        return "MAX_MIXED"


MAX_MIXED = MaxMixed()


@dataclass(frozen=True, slots=True)
class BellSample:
    """A Bell outcome ``s = (x | z)`` in F2^{2n}."""

    n: int
    x: int
    z: int

    @property
    def code(self) -> int:
        return (self.x << self.n) | self.z

    def hex(self) -> str:
        width = (2 * self.n + 3) // 4
        return f"{self.code:0{width}x}"

    @classmethod
    def from_hex(cls, n: int, text: str) -> BellSample:
        code = int(text, 16)
        mask = (1 << n) - 1
        if code >> (2 * n):
            raise ValueError(f"hex word {text!r} exceeds {2 * n} bits")
        return cls(n, (code >> n) & mask, code & mask)


def _reject_identity(p: PauliString) -> None:
    if p.is_identity():
        raise DomainError("(1 + P)/2^n is not a state for P = identity; use MAX_MIXED")


def _check_lam(lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return float(lam)


def signal(p: PauliString | MaxMixed, lam: float) -> float:
    """Magnitude ``(1-lam)^{2|P|}`` of the coset bias; zero under H0.

    The signed moment is ``E[(-1)^{<s,p>}] = (-1)^{<p>} signal``.
    """
    lam = _check_lam(lam)
    if isinstance(p, MaxMixed):
        return 0.0
    return (1.0 - lam) ** (2 * p.weight)


def bell_prob(p: PauliString | MaxMixed, lam: float, s: BellSample) -> float:
    """Closed-form probability of Bell outcome ``s`` on two noisy copies."""
    n = s.n
    if isinstance(p, MaxMixed):
        _check_lam(lam)
        return 4.0**-n
    if p.n != n:
        raise ValueError("sample and Pauli sizes differ")
    _reject_identity(p)
    sign = -1.0 if parity((s.x & p.z) ^ (s.z & p.x)) ^ phase_form(p) else 1.0
    return 4.0**-n * (1.0 + signal(p, lam) * sign)


def bell_distribution(p: PauliString | MaxMixed, lam: float, n: int) -> np.ndarray:
    """Full probability vector over symplectic codes ``(x << n) | z``, for n <= 10."""
    if n > 10:
        raise ValueError("full Bell distribution is limited to n <= 10")
    codes = np.arange(4**n, dtype=np.uint64)
    if isinstance(p, MaxMixed):
        _check_lam(lam)
        return np.full(4**n, 4.0**-n)
    _reject_identity(p)
    mask = np.uint64((1 << n) - 1)
    sx, sz = codes >> np.uint64(n), codes & mask
    par = (np.bitwise_count((sx & np.uint64(p.z)) ^ (sz & np.uint64(p.x))) & 1) ^ phase_form(p)
    return 4.0**-n * (1.0 + signal(p, lam) * (1.0 - 2.0 * par))


def _flip_vector(p: PauliString) -> tuple[int, int]:
    """A word ``e`` with ``<e, p> = 1``; XOR with it swaps the two cosets."""
    if p.z:
        return p.z & -p.z, 0
    if p.x:
        return 0, p.x & -p.x
    raise DomainError("the identity has an empty odd coset")


def _uniform_words(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 1 << n, size=size, dtype=np.uint64)


def coset_uniform(p: PauliString, par: int, rng: np.random.Generator, size: int | None = None):
    """Uniform draw from ``{s : <s,p> = par}``.

    Returns a :class:`BellSample` when ``size`` is None, otherwise a pair of
    uint64 arrays ``(x, z)``.
    """
    if par not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    if par == 1 and p.is_identity():
        raise DomainError("the identity has an empty odd coset")
    n = p.n
    count = 1 if size is None else int(size)
    sx = _uniform_words(n, count, rng)
    sz = _uniform_words(n, count, rng)
    if not p.is_identity():
        cur = np.bitwise_count((sx & np.uint64(p.z)) ^ (sz & np.uint64(p.x))) & 1
        wrong = cur != par
        ex, ez = _flip_vector(p)
        sx[wrong] ^= np.uint64(ex)
        sz[wrong] ^= np.uint64(ez)
    if size is None:
        return BellSample(n, int(sx[0]), int(sz[0]))
    return sx, sz


def sample_bell_batch(p: PauliString | MaxMixed, lam: float, size: int, rng: np.random.Generator,
                      n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``size`` exact Bell outcomes as uint64 arrays ``(x, z)``."""
    lam = _check_lam(lam)
    if isinstance(p, MaxMixed):
        if n is None or not 1 <= n <= MAX_QUBITS:
            raise ValueError("n is required (1..63) for the maximally mixed hypothesis")
        return _uniform_words(n, size, rng), _uniform_words(n, size, rng)
    if n is not None and n != p.n:
        raise ValueError("n disagrees with the Pauli size")
    _reject_identity(p)
    flip = rng.random(size) >= 0.5 * (1.0 + signal(p, lam))
    sx, sz = coset_uniform(p, phase_form(p), rng, size)
    ex, ez = _flip_vector(p)
    sx[flip] ^= np.uint64(ex)
    sz[flip] ^= np.uint64(ez)
    return sx, sz


def sample_bell(p: PauliString | MaxMixed, lam: float, rng: np.random.Generator,
                n: int | None = None) -> BellSample:
    sx, sz = sample_bell_batch(p, lam, 1, rng, n)
    return BellSample(n if isinstance(p, MaxMixed) else p.n, int(sx[0]), int(sz[0]))
