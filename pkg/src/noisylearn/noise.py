"""Closed-form arithmetic of local depolarizing and erasure noise."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .pauli import PauliString


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class NoiseModel:
    """Per-qubit depolarizing strength and per-leg erasure rate."""

    lam: float = 0.0
    erasure_rate: float = 0.0

    def __post_init__(self):
        _check_unit("lambda", self.lam)
        _check_unit("erasure_rate", self.erasure_rate)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"lambda": d["lam"], "erasure_rate": d["erasure_rate"]}

    @classmethod
    def from_dict(cls, d: dict) -> NoiseModel:
        unknown = set(d) - {"lambda", "erasure_rate"}
        if unknown:
            raise KeyError(f"unknown noise keys: {sorted(unknown)}")
        return cls(lam=float(d.get("lambda", 0.0)), erasure_rate=float(d.get("erasure_rate", 0.0)))


def f_lambda(lam: float) -> float:
    """``1 - lam + lam^2 / 2``: the per-site value of a depolarized SWAP on a product state."""
    lam = _check_unit("lambda", lam)
    return 1.0 - lam + 0.5 * lam * lam


def pauli_damping(p: PauliString, lam: float) -> float:
    """Factor ``(1-lam)^|P|`` by which local depolarizing noise shrinks a Pauli."""
    lam = _check_unit("lambda", lam)
    return (1.0 - lam) ** p.weight


def swap1() -> np.ndarray:
    s = np.zeros((4, 4))
    for a in range(2):
        for b in range(2):
            s[b | (a << 1), a | (b << 1)] = 1.0
    return s


def h_lambda_op(lam: float) -> np.ndarray:
    """Two-qubit operator ``2 lam (1-lam) I + 2 (1-lam)^2 SWAP``.

    This is the operator used in the unbounded-memory argument. The exact
    single-site Pauli twirl of two depolarized copies is
    :func:`pauli_twirl_op`; the two differ by ``lam^2 I``.
    """
    lam = _check_unit("lambda", lam)
    return 2 * lam * (1 - lam) * np.eye(4) + 2 * (1 - lam) ** 2 * swap1()


def pauli_twirl_op(lam: float) -> np.ndarray:
    """``sum_P D[P] (x) D[P]`` over the four single-qubit Paulis: ``lam(2-lam) I + 2(1-lam)^2 SWAP``."""
    lam = _check_unit("lambda", lam)
    return lam * (2 - lam) * np.eye(4) + 2 * (1 - lam) ** 2 * swap1()


def depolarized_swap1(lam: float) -> np.ndarray:
    """``(D (x) D)[SWAP_1] = lam(2-lam)/2 I + (1-lam)^2 SWAP``."""
    lam = _check_unit("lambda", lam)
    return 0.5 * lam * (2 - lam) * np.eye(4) + (1 - lam) ** 2 * swap1()


def erasure_mask(n_legs: int, rate: float, rng: np.random.Generator, size=None) -> np.ndarray:
    """Boolean mask with each entry set independently with probability ``rate``.

    ``size`` prepends batch dimensions (e.g. one row per trial).
    """
    rate = _check_unit("erasure rate", rate)
    shape = (n_legs,) if size is None else tuple(np.atleast_1d(size)) + (n_legs,)
    if rate == 0.0:
        return np.zeros(shape, dtype=bool)
    if rate == 1.0:
        return np.ones(shape, dtype=bool)
    return rng.random(shape) < rate
