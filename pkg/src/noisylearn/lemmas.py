"""
Dense numerical checks of the closed-form identities and bounds on depolarized SWAP operators.

Every check returns a :class:`LemmaReport`. Equality checks pass when the
observed value is within ``1e-9`` of the target; bound checks pass when the
worst observed value exceeds the bound by at most ``1e-9``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .dense import (MAX_DENSE_QUBITS, depolarize_array, haar_vector, join, kron_all,
                    pairwise_product, swap_op)
from .errors import CapacityError, DomainError
from .noise import f_lambda, swap1

TOL = 1e-9
NODE_CAP = 5
POVM_SOURCES = ("computational", "haar-basis", "coarse", "overcomplete")
REPORT_FIELDS = ("lemma_id", "n", "lambda", "observed", "bound_or_target", "kind", "pass")


@dataclass(frozen=True)
class LemmaReport:
    lemma_id: str
    n: int
    lam: float
    observed: float
    bound_or_target: float
    kind: str  # "equality" or "upper-bound"
    passed: bool

    @classmethod
    def make(cls, lemma_id: str, n: int, lam: float, observed: float, target: float, kind: str,
             tol: float = TOL) -> LemmaReport:
        if kind == "equality":
            ok = abs(observed - target) <= tol
        elif kind == "upper-bound":
            ok = observed <= target + tol
        else:
            raise ValueError(f"unknown report kind {kind!r}")
        return cls(lemma_id, n, float(lam), float(observed), float(target), kind, bool(ok))

    def row(self) -> dict:
        d = asdict(self)
        return {"lemma_id": d["lemma_id"], "n": d["n"], "lambda": d["lam"], "observed": d["observed"],
                "bound_or_target": d["bound_or_target"], "kind": d["kind"], "pass": d["passed"]}


def _check_args(n: int, lam: float, cap: int = MAX_DENSE_QUBITS // 2) -> None:
    if not 1 <= n <= cap:
        raise CapacityError(f"this check supports 1 <= n <= {cap}, got {n}")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")


def depolarized_swap(n: int, lam: float) -> np.ndarray:
    """``(D (x) D)[SWAP_n]`` on 2n qubits, computed by applying the channel densely."""
    return depolarize_array(swap_op(n).matrix, lam)


def _doubled_expectations(op: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """``<phi phi| op |phi phi>`` for each row ``phi`` of ``vecs``."""
    d = vecs.shape[1]
    # join(phi, phi) = kron(phi, phi) has index a + d*b with a on the first register
    pp = np.einsum("kb,ka->kba", vecs, vecs).reshape(len(vecs), d * d)
    return np.real(np.einsum("ki,ij,kj->k", pp.conj(), op, pp))


def _haar_vectors(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    return np.stack([haar_vector(n, rng) for _ in range(count)])


def _product_vectors(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    return np.stack([kron_all([haar_vector(1, rng) for _ in range(n)]) for _ in range(count)])


def check_depol_swap(n: int, lam: float, state_source: str = "haar", trials: int = 1000,
                     rng: np.random.Generator | None = None) -> LemmaReport:
    """Worst ``tr(|phi><phi|^2 (D (x) D)[SWAP_n])`` against ``f(lam)^n``.

    Product states attain the value exactly, so that source is reported as an
    equality check on its largest deviation.
    """
    _check_args(n, lam)
    rng = rng if rng is not None else np.random.default_rng(0)
    op = depolarized_swap(n, lam)
    target = f_lambda(lam) ** n
    if state_source == "haar":
        vals = _doubled_expectations(op, _haar_vectors(n, trials, rng))
        return LemmaReport.make("depol_swap", n, lam, vals.max(), target, "upper-bound")
    if state_source == "product":
        vals = _doubled_expectations(op, _product_vectors(n, trials, rng))
        worst = vals[np.argmax(np.abs(vals - target))]
        return LemmaReport.make("depol_swap_product", n, lam, worst, target, "equality")
    raise ValueError(f"unknown state source {state_source!r}")


def check_depol_swap2(n: int, lam: float, trials: int = 1000,
                      rng: np.random.Generator | None = None) -> LemmaReport:
    """Worst value of ``(D (x) D)[(2 SWAP_1 - 1)^n]`` on doubled Haar states against ``(1+3^n)(1-lam)^{2n}/2``."""
    _check_args(n, lam)
    rng = rng if rng is not None else np.random.default_rng(0)
    op = depolarize_array(pairwise_product(2 * swap1() - np.eye(4), n), lam)
    vals = _doubled_expectations(op, _haar_vectors(n, trials, rng))
    bound = (1 + 3**n) * (1 - lam) ** (2 * n) / 2
    return LemmaReport.make("depol_swap2", n, lam, vals.max(), bound, "upper-bound")


def check_purity_trace_identity(n: int, lam: float) -> LemmaReport:
    """``tr((D (x) D)[SWAP_n]^2) / 4^n`` against ``((1 + 3(1-lam)^4)/4)^n``."""
    _check_args(n, lam)
    a = depolarized_swap(n, lam)
    observed = float(np.real(np.sum(a * a.T))) / 4**n
    target = ((1 + 3 * (1 - lam) ** 4) / 4) ** n
    return LemmaReport.make("purity_trace", n, lam, observed, target, "equality")


def _haar_basis(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def sample_rank1_povm(n: int, source: str, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """A rank-one POVM ``{2^n w_s |psi_s><psi_s|}`` as ``(weights, vectors)``; weights sum to 1.

    ``coarse`` draws a random two-outcome POVM ``{F, 1 - F}`` and refines
    both elements into their eigenvectors. ``overcomplete`` normalises
    ``2^{n+1}`` random vectors into a non-orthogonal rank-one POVM.
    """
    d = 2**n
    if source == "computational":
        return np.full(d, 1.0 / d), np.eye(d, dtype=complex)
    if source == "haar-basis":
        return np.full(d, 1.0 / d), _haar_basis(d, rng).T
    if source == "coarse":
        basis = _haar_basis(d, rng)
        t = rng.random(d)
        w = np.concatenate([t, 1 - t]) / d
        return w, np.concatenate([basis.T, basis.T])
    if source == "overcomplete":
        k = 2 * d
        phis = np.stack([haar_vector(n, rng) for _ in range(k)])
        frame = phis.T @ phis.conj()
        evals, evecs = np.linalg.eigh(frame)
        inv_sqrt = evecs @ np.diag(evals**-0.5) @ evecs.conj().T
        tilde = phis @ inv_sqrt.T  # rows are S^{-1/2} phi_k
        norms = np.sum(np.abs(tilde) ** 2, axis=1)
        return norms / d, tilde / np.sqrt(norms)[:, None]
    raise ValueError(f"unknown POVM source {source!r}; choose from {POVM_SOURCES}")


def node_quantity(op: np.ndarray, weights: np.ndarray, vecs: np.ndarray, n: int) -> float:
    return float(2.0**-n * np.dot(weights, _doubled_expectations(op, vecs)))


def check_node_concentration(n: int, lam: float, povm_source: str = "haar-basis", trials: int = 100,
                             rng: np.random.Generator | None = None) -> LemmaReport:
    """Worst ``2^-n sum_s w_s tr(|psi_s><psi_s|^2 (D (x) D)[SWAP_n])`` over sampled POVMs against ``(f/2)^n``.

    The bound covers every POVM; the sampled families are spot checks.
    """
    _check_args(n, lam, cap=min(NODE_CAP, MAX_DENSE_QUBITS // 2))
    rng = rng if rng is not None else np.random.default_rng(0)
    op = depolarized_swap(n, lam)
    count = 1 if povm_source == "computational" else trials
    worst = max(node_quantity(op, *sample_rank1_povm(n, povm_source, rng), n) for _ in range(count))
    return LemmaReport.make(f"node_concentration_{povm_source}", n, lam, worst,
                            (f_lambda(lam) / 2) ** n, "upper-bound")


def lambda_grid(points: int = 11) -> list[float]:
    return [round(x, 12) for x in np.linspace(0.0, 1.0, points)]


def run_lemma_sweep(ns: Iterable[int] = (1, 2, 3), lams: Iterable[float] | None = None, trials: int = 200,
                    seed: int = 0) -> list[LemmaReport]:
    """All checks over an ``(n, lam)`` grid, sorted by ``(lemma_id, n, lam)``."""
    lams = lambda_grid() if lams is None else list(lams)
    reports = []
    for n in ns:
        for j, lam in enumerate(lams):
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, j)))
            reports.append(check_depol_swap(n, lam, "haar", trials, rng))
            reports.append(check_depol_swap(n, lam, "product", trials, rng))
            reports.append(check_depol_swap2(n, lam, trials, rng))
            reports.append(check_purity_trace_identity(n, lam))
            for src in POVM_SOURCES:
                reports.append(check_node_concentration(n, lam, src, max(1, trials // 10), rng))
    return sorted(reports, key=lambda r: (r.lemma_id, r.n, r.lam))


def reports_to_csv(reports: Iterable[LemmaReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        row = r.row()
        row["lambda"] = f"{row['lambda']:.12g}"
        row["observed"] = f"{row['observed']:.12g}"
        row["bound_or_target"] = f"{row['bound_or_target']:.12g}"
        row["pass"] = int(row["pass"])
        writer.writerow(row)
    return buf.getvalue()
