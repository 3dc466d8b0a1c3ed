"""
Symplectic representation of n-qubit Pauli strings.

A Pauli string on n qubits is stored as two n-bit integers ``x`` and ``z``.
Bit ``i`` of each word refers to qubit ``i``; the text label is read left to
right starting at qubit 0, so ``"XIZ"`` has an X on qubit 0 and a Z on
qubit 2. Per site::

    (x, z) = (0, 0) -> I
    (x, z) = (1, 0) -> X
    (x, z) = (0, 1) -> Z
    (x, z) = (1, 1) -> Y

The Hermitian operator attached to ``(x | z)`` is ``i^{x.z} X^x Z^z``.
Products are projective: the global phase is dropped.

The canonical integer code of a string is ``(x << n) | z``. Enumeration
walks codes in increasing order, which is lexicographic in ``(x | z)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import CapacityError

MAX_QUBITS = 63
ENUMERATION_CAP = 10

_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_CHAR = {v: k for k, v in _CHAR_TO_BITS.items()}


def parity(word: int) -> int:
    """Parity of the number of set bits in a non-negative integer."""
    return word.bit_count() & 1


@dataclass(frozen=True, slots=True)
class PauliString:
    """An n-qubit Pauli string ``(x | z)`` over F2."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise CapacityError(f"PauliString supports 1 <= n <= {MAX_QUBITS}, got n={self.n}")
        mask = (1 << self.n) - 1
        if self.x < 0 or self.z < 0 or self.x & ~mask or self.z & ~mask:
            raise ValueError(f"bit vectors exceed {self.n} qubits: x={self.x:#x}, z={self.z:#x}")

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        label = label.strip().upper()
        if not label:
            raise ValueError("empty Pauli label")
        x = z = 0
        for i, ch in enumerate(label):
            try:
                bx, bz = _CHAR_TO_BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli character {ch!r} in {label!r}") from None
            x |= bx << i
            z |= bz << i
        return cls(len(label), x, z)

    @classmethod
    def from_code(cls, n: int, code: int) -> PauliString:
        mask = (1 << n) - 1
        return cls(n, (code >> n) & mask, code & mask)

    @property
    def code(self) -> int:
        return (self.x << self.n) | self.z

    @property
    def label(self) -> str:
        return "".join(
            _BITS_TO_CHAR[((self.x >> i) & 1, (self.z >> i) & 1)] for i in range(self.n)
        )

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> list[int]:
        s = self.x | self.z
        return [i for i in range(self.n) if (s >> i) & 1]

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def site(self, i: int) -> str:
        """Single-qubit factor on qubit ``i`` as one of ``"IXYZ"``."""
        return _BITS_TO_CHAR[((self.x >> i) & 1, (self.z >> i) & 1)]

    def __str__(self) -> str:
        return self.label


def weight(p: PauliString) -> int:
    return p.weight


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: {p.n} vs {q.n} qubits")


def symplectic_product(p: PauliString, q: PauliString) -> int:
    """``<p, q> = p.x . q.z + p.z . q.x (mod 2)``; zero iff the operators commute."""
    _check_same_n(p, q)
    return parity((p.x & q.z) ^ (p.z & q.x))


def phase_form(p: PauliString) -> int:
    """``<p> = p.x . p.z (mod 2)``, the number of Y factors mod 2."""
    return parity(p.x & p.z)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Projective product: XOR of the bit vectors, global phase discarded."""
    _check_same_n(p, q)
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z)


def enumerate_group(n: int, include_identity: bool = True) -> Iterator[PauliString]:
    """Yield all 4^n (or 4^n - 1) Pauli strings in increasing code order."""
    if n > ENUMERATION_CAP:
        raise CapacityError(
            f"enumerating the {n}-qubit Pauli group needs 4^{n} = {4**n} elements; cap is n <= {ENUMERATION_CAP}"
        )
    if n < 1:
        raise ValueError("n must be >= 1")
    start = 0 if include_identity else 1
    for code in range(start, 4**n):
        yield PauliString.from_code(n, code)


def random_pauli(n: int, include_identity: bool, rng: np.random.Generator) -> PauliString:
    """Uniform draw from the n-qubit Pauli strings (optionally excluding the identity)."""
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"n must lie in [1, {MAX_QUBITS}], got {n}")
    while True:
        x = int(rng.integers(0, 1 << n, dtype=np.uint64))
        z = int(rng.integers(0, 1 << n, dtype=np.uint64))
        if include_identity or x or z:
            return PauliString(n, x, z)
