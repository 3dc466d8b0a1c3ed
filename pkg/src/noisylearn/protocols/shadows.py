"""
Classical shadows with random single-qubit unitaries under depolarizing noise.

Each copy goes through ``D[U D[rho] U^dagger]`` with ``U`` a product of
independent Haar-random single-qubit unitaries, and is then measured in the
computational basis. A snapshot stores the ZYZ Euler angles of every ``U_i``
together with the measured bits.

Only the Bloch vector ``n_i`` of ``U_i^dagger Z U_i`` matters for the
statistics. For a Pauli factor with unit axis ``a_i`` the single-site value
``(-1)^{s_i} n_i . a_i`` equals ``tr(U_i^dagger |s_i><s_i| U_i P_i)`` and has
mean ``(1-lam)^2 / 3`` times the true Bloch component, so

    omega(P) = ((1-lam)^2 / 3)^{|P|}

is the eigenvalue of the measurement channel on ``P`` and ``1/omega(P)``
rescales the product of site values into an unbiased estimate of ``tr(P rho)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..bell import MaxMixed
from ..dense import MAX_DENSE_QUBITS, DenseState, depolarize_array
from ..errors import CapacityError, DomainError
from ..pauli import MAX_QUBITS, PauliString

DENSE_SHADOW_CAP = 10
_CHUNK = 4096

PAULI_AXES = {
    "X": np.array([1.0, 0.0, 0.0]),
    "Y": np.array([0.0, 1.0, 0.0]),
    "Z": np.array([0.0, 0.0, 1.0]),
}


# ---------------------------------------------------------------- unitaries

def haar_unitary_1q(rng: np.random.Generator, size: int | tuple = ()) -> np.ndarray:
    """Haar-random 2x2 unitaries, shape ``size + (2, 2)``.

    QR of a complex Gaussian matrix, with the phases of ``R``'s diagonal
    pushed into ``Q`` so the result is exactly Haar distributed.
    """
    shape = tuple(np.atleast_1d(size)) if size != () else ()
    g = rng.normal(size=shape + (2, 2)) + 1j * rng.normal(size=shape + (2, 2))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def unitary_to_angles(u: np.ndarray) -> np.ndarray:
    """ZYZ angles ``(phi, theta, omega)`` with ``u ~ Rz(phi) Ry(theta) Rz(omega)`` up to phase."""
    u = np.asarray(u)
    theta = 2.0 * np.arctan2(np.abs(u[..., 1, 0]), np.abs(u[..., 0, 0]))
    phi = np.angle(u[..., 1, 0] * np.conj(u[..., 0, 0]))
    omega = np.angle(u[..., 1, 1] * np.conj(u[..., 1, 0]))
    return np.stack([phi, theta, omega], axis=-1)


def angles_to_unitary(angles: np.ndarray) -> np.ndarray:
    """Inverse of :func:`unitary_to_angles` (fixing the global phase)."""
    angles = np.asarray(angles, dtype=float)
    phi, theta, omega = angles[..., 0], angles[..., 1], angles[..., 2]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    u = np.empty(angles.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = np.exp(-0.5j * (phi + omega)) * c
    u[..., 0, 1] = -np.exp(-0.5j * (phi - omega)) * s
    u[..., 1, 0] = np.exp(0.5j * (phi - omega)) * s
    u[..., 1, 1] = np.exp(0.5j * (phi + omega)) * c
    return u


def measurement_axes(angles: np.ndarray) -> np.ndarray:
    """Bloch vector of ``U^dagger Z U`` for each stored rotation."""
    u = angles_to_unitary(angles)
    z = np.array([1.0, -1.0])
    m = np.einsum("...ki,k,...kj->...ij", u.conj(), z, u)
    return np.stack([m[..., 0, 1].real, -m[..., 0, 1].imag, m[..., 0, 0].real], axis=-1)


# ---------------------------------------------------------------- records

@dataclass(frozen=True)
class ShadowSnapshot:
    unitary_params: np.ndarray  # shape (n, 3)
    outcome: int  # bit i is the result on qubit i

    def __post_init__(self):
        params = np.asarray(self.unitary_params, dtype=float)
        if params.ndim != 2 or params.shape[1] != 3:
            raise ValueError(f"expected n triples of angles, got shape {params.shape}")
        if not 0 <= self.outcome < 1 << params.shape[0]:
            raise ValueError("outcome has more bits than there are qubits")
        object.__setattr__(self, "unitary_params", params)

    @property
    def n(self) -> int:
        return self.unitary_params.shape[0]


class ShadowData(Sequence[ShadowSnapshot]):
    """Array-backed sequence of snapshots.

    ``params`` has shape ``(N, n, 3)`` and ``bits`` shape ``(N, n)``.
    Indexing yields :class:`ShadowSnapshot` records.
    """

    def __init__(self, params: np.ndarray, bits: np.ndarray):
        params = np.asarray(params, dtype=float)
        bits = np.asarray(bits, dtype=np.uint8)
        if params.ndim != 3 or params.shape[2] != 3 or bits.shape != params.shape[:2]:
            raise ValueError("params must be (N, n, 3) and bits (N, n)")
        self.params = params
        self.bits = bits

    @classmethod
    def from_snapshots(cls, snaps: Sequence[ShadowSnapshot]) -> ShadowData:
        if isinstance(snaps, ShadowData):
            return snaps
        snaps = list(snaps)
        if not snaps:
            raise ValueError("no snapshots")
        n = snaps[0].n
        if any(s.n != n for s in snaps):
            raise ValueError("snapshots on different qubit counts")
        params = np.stack([s.unitary_params for s in snaps])
        bits = np.array([[(s.outcome >> i) & 1 for i in range(n)] for s in snaps], dtype=np.uint8)
        return cls(params, bits)

    @property
    def n(self) -> int:
        return self.params.shape[1]

    def __len__(self) -> int:
        return self.params.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return ShadowData(self.params[i], self.bits[i])
        word = int(np.dot(self.bits[i].astype(np.int64), 1 << np.arange(self.n)))
        return ShadowSnapshot(self.params[i], word)

    def __iter__(self) -> Iterator[ShadowSnapshot]:
        for i in range(len(self)):
            yield self[i]

    def outcomes(self) -> np.ndarray:
        """Outcome words, bit i for qubit i."""
        return self.bits.astype(np.int64) @ (1 << np.arange(self.n, dtype=np.int64))


@dataclass(frozen=True)
class ShadowEstimate:
    observable: PauliString
    value: float
    batch_count: int

    def __post_init__(self):
        if self.batch_count < 1:
            raise ValueError("batch_count must be at least 1")


# ---------------------------------------------------------------- collection

def _check_lam(lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return float(lam)


def _product_bloch(spec, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Site Bloch vectors of the product eigenstates mixing into ``spec``.

    ``(1 + P)/2^n`` is the uniform mixture over sign patterns ``e`` on the
    support with ``prod e_i = +1`` of ``prod_i (1 + e_i P_i)/2``.
    """
    bloch = np.zeros((size, n, 3))
    if isinstance(spec, MaxMixed):
        return bloch
    sup = spec.support
    signs = rng.choice((-1.0, 1.0), size=(size, len(sup)))
    signs[:, -1] *= np.prod(signs, axis=1)  # force even parity of minus signs
    for j, q in enumerate(sup):
        bloch[:, q, :] = signs[:, j, None] * PAULI_AXES[spec.site(q)]
    return bloch


def _collect_product(spec, n: int, lam: float, N: int, rng: np.random.Generator):
    u = haar_unitary_1q(rng, (N, n))
    params = unitary_to_angles(u)
    axes = measurement_axes(params)
    bloch = _product_bloch(spec, n, N, rng)
    p0 = 0.5 * (1.0 + (1.0 - lam) ** 2 * np.einsum("abk,abk->ab", axes, bloch))
    bits = (rng.random((N, n)) >= p0).astype(np.uint8)
    return ShadowData(params, bits)


def _full_unitaries(u: np.ndarray) -> np.ndarray:
    """Batched ``kron(U_{n-1}, ..., U_0)`` from an ``(N, n, 2, 2)`` stack."""
    full = u[:, 0]
    for q in range(1, u.shape[1]):
        nb, d = full.shape[0], full.shape[1]
        full = np.einsum("aij,akl->aikjl", u[:, q], full).reshape(nb, 2 * d, 2 * d)
    return full


def dense_outcome_probabilities(rho: DenseState, lam: float, params: np.ndarray) -> np.ndarray:
    """Exact outcome distribution of ``D[U D[rho] U^dagger]`` for each stored rotation set.

    ``params`` has shape ``(N, n, 3)``; the result has shape ``(N, 2^n)``.
    """
    rho1 = depolarize_array(rho.matrix, lam)
    full = _full_unitaries(angles_to_unitary(params))
    rho2 = full @ rho1 @ np.conj(np.swapaxes(full, -1, -2))
    rho3 = depolarize_array(rho2, lam)
    probs = np.clip(np.real(np.diagonal(rho3, axis1=-2, axis2=-1)), 0.0, None)
    return probs / probs.sum(axis=-1, keepdims=True)


def _collect_dense(rho: DenseState, lam: float, N: int, rng: np.random.Generator):
    n = rho.m
    params_all, bits_all = [], []
    for start in range(0, N, _CHUNK):
        k = min(_CHUNK, N - start)
        params = unitary_to_angles(haar_unitary_1q(rng, (k, n)))
        probs = dense_outcome_probabilities(rho, lam, params)
        cdf = np.cumsum(probs, axis=1)
        idx = (cdf < rng.random(k)[:, None]).sum(axis=1)
        idx = np.minimum(idx, probs.shape[1] - 1)
        params_all.append(params)
        bits_all.append(((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8))
    return ShadowData(np.concatenate(params_all), np.concatenate(bits_all))


def shadow_collect(state_spec, n: int, lam: float, N: int, rng: np.random.Generator) -> ShadowData:
    """Collect ``N`` noisy snapshots.

    ``state_spec`` may be a non-identity :class:`PauliString` (the state
    ``(1 + P)/2^n``), ``MAX_MIXED``, or a :class:`DenseState` on at most 10
    qubits. The first two use a per-site sampler valid at any ``n``; dense
    states are evolved as explicit matrices.
    """
    lam = _check_lam(lam)
    if N < 1:
        raise ValueError("N must be positive")
    if isinstance(state_spec, DenseState):
        if state_spec.m != n:
            raise ValueError("state size does not match n")
        if n > DENSE_SHADOW_CAP:
            raise CapacityError(f"dense shadow collection supports n <= {DENSE_SHADOW_CAP}")
        return _collect_dense(state_spec, lam, N, rng)
    if isinstance(state_spec, PauliString):
        if state_spec.n != n:
            raise ValueError("Pauli size does not match n")
        if state_spec.is_identity():
            raise DomainError("(1 + P)/2^n is not a state for P = identity; use MAX_MIXED")
    elif not isinstance(state_spec, MaxMixed):
        raise CapacityError(
            f"state of type {type(state_spec).__name__} has no factorised form; "
            f"pass a DenseState on at most {min(DENSE_SHADOW_CAP, MAX_DENSE_QUBITS)} qubits"
        )
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"n must lie in [1, {MAX_QUBITS}]")
    return _collect_product(state_spec, n, lam, N, rng)


# ---------------------------------------------------------------- estimation

def shadow_weight(p: PauliString, lam: float) -> float:
    return ((1.0 - lam) ** 2 / 3.0) ** p.weight


def site_products(snapshots, p: PauliString) -> np.ndarray:
    """``prod_{i in supp P} (-1)^{s_i} n_i . a_i`` for each snapshot (no rescaling)."""
    data = ShadowData.from_snapshots(snapshots)
    if data.n != p.n:
        raise ValueError("snapshot and Pauli sizes differ")
    out = np.ones(len(data))
    for q in p.support:
        axis = measurement_axes(data.params[:, q])
        sign = 1.0 - 2.0 * data.bits[:, q]
        out *= sign * (axis @ PAULI_AXES[p.site(q)])
    return out


def channel_eigenvalue(snapshots, p: PauliString) -> tuple[float, float]:
    """Sample mean and standard error of :func:`site_products`.

    On snapshots of ``(1 + P)/2^n`` the mean estimates ``omega(P)``.
    """
    vals = site_products(snapshots, p)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(len(vals)))


def default_batch_count(M: int = 1, delta: float = 1 / 3) -> int:
    """``ceil(2 log(2M / delta))`` batches for ``M`` observables at failure rate ``delta``."""
    return max(1, math.ceil(2.0 * math.log(2.0 * M / delta)))


def median_of_means(values, K: int) -> float:
    """Median of ``K`` contiguous batch means; the tail remainder is dropped.

    For even ``K`` the lower median is returned.
    """
    values = np.asarray(values, dtype=float)
    if K < 1:
        raise ValueError("K must be at least 1")
    if values.size < K:
        raise ValueError(f"need at least K={K} values, got {values.size}")
    size = values.size // K
    means = np.sort(values[: K * size].reshape(K, size).mean(axis=1))
    return float(means[(K - 1) // 2])


def shadow_estimate(snapshots, p: PauliString, lam: float, lam_assumed: float | None = None,
                    batches: int | None = None) -> ShadowEstimate:
    """Median-of-means estimate of ``tr(P rho)``.

    ``lam_assumed`` sets the noise level used for rescaling when it differs
    from the true one; by default the calibrated value ``lam`` is used.
    """
    lam = _check_lam(lam)
    scale_lam = lam if lam_assumed is None else _check_lam(lam_assumed)
    if scale_lam >= 1.0:
        raise DomainError("the shadow weight vanishes at lambda = 1")
    data = ShadowData.from_snapshots(snapshots)
    if len(data) == 0:
        raise ValueError("no snapshots")
    K = min(default_batch_count() if batches is None else batches, len(data))
    if p.is_identity():
        return ShadowEstimate(p, 1.0, K)
    vals = site_products(data, p) / shadow_weight(p, scale_lam)
    return ShadowEstimate(p, median_of_means(vals, K), K)
