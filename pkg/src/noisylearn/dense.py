"""
Brute-force dense-matrix simulation on at most 12 qubits.

Everything here is deliberately naive: states and operators are explicit
2^m x 2^m arrays and channels are applied qubit by qubit. The module is
the ground truth the closed-form code paths are checked against.

Conventions
-----------
* qubit ``q`` is bit ``q`` of the computational-basis index (qubit 0 is
  the least significant bit), so the matrix of ``A_0 (x) ... (x) A_{m-1}``
  is ``kron(A_{m-1}, ..., A_0)``;
* in two-register layouts the first register occupies the low qubits
  ``0 .. n-1`` and the second register the high qubits ``n .. 2n-1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError, NumericalError
from .pauli import PauliString, enumerate_group, parity

MAX_DENSE_QUBITS = 12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=float) / np.sqrt(2)
SINGLE_QUBIT_PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def _check_capacity(m: int) -> None:
    if m > MAX_DENSE_QUBITS:
        raise CapacityError(
            f"dense simulation of {m} qubits needs a {2**m}x{2**m} matrix; cap is {MAX_DENSE_QUBITS} qubits"
        )
    if m < 1:
        raise ValueError("need at least one qubit")


def _num_qubits(dim: int) -> int:
    m = dim.bit_length() - 1
    if dim != 1 << m:
        raise ValueError(f"dimension {dim} is not a power of two")
    return m


@dataclass(frozen=True)
class DenseOp:
    """An explicit operator on ``m`` qubits."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator must be square, got shape {mat.shape}")
        _num_qubits(mat.shape[0])
        object.__setattr__(self, "matrix", mat)

    @property
    def m(self) -> int:
        return _num_qubits(self.matrix.shape[0])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DenseState(DenseOp):
    """A density matrix. Validity is checked on demand by :meth:`validate`."""

    def validate(self, tol: float = 1e-10, eig_tol: float = 1e-8) -> None:
        rho = self.matrix
        tr = np.trace(rho)
        if abs(tr - 1) > tol:
            raise NumericalError(f"trace {tr} differs from 1")
        if np.abs(rho - rho.conj().T).max() > tol:
            raise NumericalError("density matrix is not Hermitian")
        lo = np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()
        if lo < -eig_tol:
            raise NumericalError(f"minimum eigenvalue {lo:.3e} below -{eig_tol:g}")

    def purity(self) -> float:
        return float(np.real(np.sum(self.matrix * self.matrix.T)))


# ---------------------------------------------------------------- builders

def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product with ``factors[q]`` acting on qubit ``q``."""
    return reduce(np.kron, reversed(list(factors)))


def join(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Two-register product: ``first`` on the low qubits, ``second`` on the high ones."""
    return np.kron(second, first)


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Hermitian matrix ``i^{x.z} X^x Z^z`` of a Pauli string."""
    _check_capacity(p.n)
    return kron_all([SINGLE_QUBIT_PAULIS[p.site(q)] for q in range(p.n)])


def state_max_mixed(n: int) -> DenseState:
    _check_capacity(n)
    d = 1 << n
    return DenseState(np.eye(d, dtype=complex) / d)


def state_i_plus_p(p: PauliString) -> DenseState:
    """The state ``(1 + P) / 2^n``; the identity is rejected (it would not be normalised)."""
    if p.is_identity():
        raise DomainError("(1 + P)/2^n with P = identity has trace 2; use state_max_mixed")
    d = 1 << p.n
    return DenseState((np.eye(d) + pauli_matrix(p)) / d)


def haar_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    d = 1 << n
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def state_pure(vec: np.ndarray) -> DenseState:
    vec = np.asarray(vec, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    return DenseState(np.outer(vec, vec.conj()))


def state_haar_pure(n: int, rng: np.random.Generator) -> DenseState:
    _check_capacity(n)
    return state_pure(haar_vector(n, rng))


def state_basis(n: int, index: int) -> DenseState:
    _check_capacity(n)
    d = 1 << n
    mat = np.zeros((d, d), dtype=complex)
    mat[index, index] = 1.0
    return DenseState(mat)


# ---------------------------------------------------------------- channels

def _qubit_view(mat: np.ndarray, m: int, q: int) -> np.ndarray:
    a, b = 1 << (m - 1 - q), 1 << q
    return mat.reshape(mat.shape[:-2] + (a, 2, b, a, 2, b))


def depolarize_array(mat: np.ndarray, lam: float, qubits: Sequence[int] | None = None) -> np.ndarray:
    """Apply ``A -> (1-lam) A + lam tr_q(A) (x) I/2`` on each listed qubit of an operator.

    Leading axes are treated as a batch, so a stack of matrices of shape
    ``(..., d, d)`` is handled in one call.
    """
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"depolarizing strength must lie in [0, 1], got {lam}")
    m = _num_qubits(mat.shape[-1])
    out = np.array(mat, copy=True)
    if lam == 0.0:
        return out
    for q in range(m) if qubits is None else qubits:
        if not 0 <= q < m:
            raise ValueError(f"qubit {q} out of range for {m} qubits")
        t = _qubit_view(out, m, q)
        half_trace = 0.5 * lam * (t[..., :, 0, :, :, 0, :] + t[..., :, 1, :, :, 1, :])
        t *= 1 - lam
        t[..., :, 0, :, :, 0, :] += half_trace
        t[..., :, 1, :, :, 1, :] += half_trace
    return out


def depolarize(state: DenseOp, lam: float, qubit_subset: Sequence[int] | None = None) -> DenseOp:
    """Single-qubit depolarizing channel on each qubit of ``qubit_subset`` (default: all).

    Operators are handled by linear extension; the channel is self-adjoint so
    the same map serves for states and observables. The return type matches
    the input type.
    """
    return type(state)(depolarize_array(state.matrix, lam, qubit_subset))


def apply_1q(mat: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    """Conjugate a density matrix by a single-qubit unitary on qubit ``q``."""
    m = _num_qubits(mat.shape[0])
    t = _qubit_view(mat, m, q)
    t = np.einsum("ij,ajbckd->aibckd", u, t)
    t = np.einsum("kl,aibcld->aibckd", u.conj(), t)
    return t.reshape(mat.shape)


def permute_qubits(mat: np.ndarray, dest: Sequence[int]) -> np.ndarray:
    """Relabel qubits so that old qubit ``q`` becomes qubit ``dest[q]``."""
    m = _num_qubits(mat.shape[0])
    if sorted(dest) != list(range(m)):
        raise ValueError("dest must be a permutation of the qubit indices")
    t = mat.reshape((2,) * (2 * m))
    # tensor axis of qubit q is m-1-q for rows and 2m-1-q for columns
    axes = [0] * (2 * m)
    for q, d in enumerate(dest):
        axes[m - 1 - d] = m - 1 - q
        axes[2 * m - 1 - d] = 2 * m - 1 - q
    return t.transpose(axes).reshape(mat.shape)


def pairwise_product(op2: np.ndarray, n: int) -> np.ndarray:
    """``op2`` applied to every qubit pair ``(i, n+i)`` of a two-register system.

    ``op2`` is a 4x4 matrix whose low qubit is the first-register qubit.
    """
    _check_capacity(2 * n)
    interleaved = kron_all([op2] * n)
    dest = [q // 2 + (n if q % 2 else 0) for q in range(2 * n)]
    return permute_qubits(interleaved, dest)


def apply_unitary(mat: np.ndarray, u: np.ndarray) -> np.ndarray:
    return u @ mat @ u.conj().T


def apply_permutation(mat: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Conjugate by the permutation unitary sending basis state ``i`` to ``perm[i]``."""
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return mat[np.ix_(inv, inv)]


def partial_trace(mat: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced operator on the qubits in ``keep``, which keep their relative order."""
    m = _num_qubits(mat.shape[0])
    keep = sorted(set(keep))
    t = mat.reshape((2,) * (2 * m))
    # row axis of qubit q is m-1-q, column axis is 2m-1-q
    row_letters = [chr(ord("a") + i) for i in range(m)]
    col_letters = [chr(ord("A") + i) for i in range(m)]
    for q in range(m):
        if q not in keep:
            col_letters[m - 1 - q] = row_letters[m - 1 - q]
    out_rows = [row_letters[m - 1 - q] for q in reversed(keep)]
    out_cols = [col_letters[m - 1 - q] for q in reversed(keep)]
    spec = "".join(row_letters + col_letters) + "->" + "".join(out_rows + out_cols)
    k = len(keep)
    return np.einsum(spec, t).reshape(1 << k, 1 << k)



# ---------------------------------------------------------------- operators

def swap_op(n: int) -> DenseOp:
    """SWAP between the two n-qubit registers of a 2n-qubit system."""
    _check_capacity(2 * n)
    d = 1 << n
    idx = np.arange(d * d)
    a, b = idx & (d - 1), idx >> n
    perm = b | (a << n)
    mat = np.zeros((d * d, d * d))
    mat[perm, idx] = 1.0
    return DenseOp(mat)


def _pauli_pair_stack(n: int) -> np.ndarray:
    """Array of ``P (x) P`` for every n-qubit Pauli, in code order."""
    return np.stack([np.kron(pm, pm) for pm in (pauli_matrix(p) for p in enumerate_group(n))])


def _bell_signs(n: int) -> np.ndarray:
    """``(-1)^{<s,p> + <p>}`` for every pair of codes ``(s, p)``."""
    codes = range(4**n)
    mask = (1 << n) - 1
    signs = np.empty((4**n, 4**n))
    for s in codes:
        sx, sz = s >> n, s & mask
        for p in codes:
            px, pz = p >> n, p & mask
            signs[s, p] = -1.0 if parity((sx & pz) ^ (sz & px)) ^ parity(px & pz) else 1.0
    return signs


def bell_povm_element(s: int, n: int) -> DenseOp:
    """``Pi_s = 4^{-n} sum_p (-1)^{<s,p> + <p>} P (x) P`` for the symplectic code ``s``."""
    _check_capacity(2 * n)
    mask = (1 << n) - 1
    sx, sz = s >> n, s & mask
    d = 1 << (2 * n)
    acc = np.zeros((d, d), dtype=complex)
    for p in enumerate_group(n):
        sign = -1.0 if parity((sx & p.z) ^ (sz & p.x)) ^ parity(p.x & p.z) else 1.0
        pm = pauli_matrix(p)
        acc += sign * np.kron(pm, pm)
    return DenseOp(acc / 4**n)


def bell_povm(n: int) -> list[DenseOp]:
    """All ``4^n`` Bell POVM elements, indexed by symplectic code."""
    _check_capacity(2 * n)
    stack = _pauli_pair_stack(n)
    elems = np.tensordot(_bell_signs(n), stack, axes=1) / 4**n
    return [DenseOp(e) for e in elems]


# ---------------------------------------------------------------- measurement

def expectation(op: DenseOp, state: DenseOp, tol: float = 1e-10) -> float:
    """``tr(op rho)`` for Hermitian ``op``; errors if the imaginary residue exceeds ``tol``."""
    if op.dim != state.dim:
        raise ValueError(f"dimension mismatch: {op.dim} vs {state.dim}")
    val = np.sum(op.matrix * state.matrix.T)
    if abs(val.imag) > tol:
        raise NumericalError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def povm_probabilities(state: DenseOp, povm: Sequence[DenseOp], tol: float = 1e-8) -> np.ndarray:
    """Outcome distribution ``tr(F_s rho)`` after completeness and positivity checks."""
    d = state.dim
    total = np.zeros((d, d), dtype=complex)
    for f in povm:
        if f.dim != d:
            raise ValueError("POVM element dimension does not match the state")
        total = total + f.matrix
        if np.linalg.eigvalsh((f.matrix + f.matrix.conj().T) / 2).min() < -tol:
            raise NumericalError("POVM element is not positive semidefinite")
    if np.abs(total - np.eye(d)).max() > tol:
        raise NumericalError("POVM elements do not sum to the identity")
    probs = np.array([np.real(np.sum(f.matrix * state.matrix.T)) for f in povm])
    if probs.min() < -1e-10:
        raise NumericalError(f"negative outcome probability {probs.min():.3e}")
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def measure_povm(state: DenseOp, povm: Sequence[DenseOp], rng: np.random.Generator, size=None):
    """Sample outcome indices with probability ``tr(F_s rho)``."""
    probs = povm_probabilities(state, povm)
    return rng.choice(len(povm), size=size, p=probs)


def basis_probabilities(state: DenseOp) -> np.ndarray:
    probs = np.real(np.diag(state.matrix)).copy()
    if probs.min() < -1e-10:
        raise NumericalError(f"negative diagonal entry {probs.min():.3e}")
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
