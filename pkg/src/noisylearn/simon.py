"""
Simon's algorithm against a lifted oracle with depolarizing noise between layers.

The lifted function takes ``2n`` input bits and answers ``f(x)`` only when
the last ``n`` bits are zero (and ``0`` otherwise). The circuit lives on
``3n`` qubits laid out as

    qubits 0 .. n-1      query register x
    qubits n .. 2n-1     padding, prepared in |0^n>
    qubits 2n .. 3n-1    output register

so basis index ``x | b << n | y << 2n``. One query is the layer sequence
``H, O, H`` (Hadamards on the query register only). Between consecutive
layers every one of the ``3n`` qubits goes through ``D_lam``; there is no
noise before the first layer or after the last one. Noise on the padding
makes the oracle see a nonzero pad and go silent, which is what washes the
signal out as ``n`` grows.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import MAX_DENSE_QUBITS, DenseOp, H, apply_permutation, depolarize_array, kron_all
from .errors import CapacityError, DomainError

MAX_SIMON_BITS = MAX_DENSE_QUBITS // 3


@dataclass(frozen=True)
class LiftedSimonOracle:
    n: int
    f_table: tuple[int, ...]
    secret: int | None  # None marks an injective function

    def __post_init__(self):
        if len(self.f_table) != 2**self.n:
            raise ValueError("table must have 2^n entries")

    def lifted(self, word: int) -> int:
        """``f~`` on a ``2n``-bit input ``x | b << n``."""
        mask = (1 << self.n) - 1
        return self.f_table[word & mask] if word >> self.n == 0 else 0


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_SIMON_BITS:
        raise CapacityError(f"the circuit uses 3n qubits; n must lie in [1, {MAX_SIMON_BITS}], got {n}")


def make_simon_instance(n: int, kind: str, rng: np.random.Generator) -> LiftedSimonOracle:
    """Random two-to-one function with a hidden nonzero period, or a random injection."""
    _check_n(n)
    N = 2**n
    if kind == "injective":
        return LiftedSimonOracle(n, tuple(int(v) for v in rng.permutation(N)), None)
    if kind != "two-to-one":
        raise ValueError(f"kind must be 'two-to-one' or 'injective', got {kind!r}")
    s = int(rng.integers(1, N))
    values = rng.permutation(N)[: N // 2]
    table = [0] * N
    k = 0
    for x in range(N):
        if x < x ^ s:
            table[x] = table[x ^ s] = int(values[k])
            k += 1
    return LiftedSimonOracle(n, tuple(table), s)


def oracle_permutation(o: LiftedSimonOracle) -> np.ndarray:
    """Basis permutation of ``|x b>|y> -> |x b>|y xor f~(x b)>``."""
    n = o.n
    idx = np.arange(2 ** (3 * n))
    inp = idx & ((1 << 2 * n) - 1)
    lifted = np.array([o.lifted(w) for w in range(2 ** (2 * n))])
    return idx ^ (lifted[inp] << (2 * n))


def oracle_unitary(o: LiftedSimonOracle) -> DenseOp:
    perm = oracle_permutation(o)
    d = perm.size
    mat = np.zeros((d, d))
    mat[perm, np.arange(d)] = 1.0
    return DenseOp(mat)


def circuit_layers(depth: int = 1) -> list[str]:
    """``H, (O, H) * depth``: ``depth`` oracle calls in one coherent circuit."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return ["hadamard"] + ["oracle", "hadamard"] * depth


@dataclass(frozen=True)
class NoisyCircuitSpec:
    layers: tuple[str, ...]
    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam}")
        bad = set(self.layers) - {"hadamard", "oracle", "identity-oracle"}
        if bad:
            raise ValueError(f"unknown layers {sorted(bad)}")


def _hadamard_low(mat: np.ndarray, n: int) -> np.ndarray:
    """Conjugate by ``H^{(x) n}`` on the lowest ``n`` qubits (real symmetric ``H``)."""
    hn = kron_all([H] * n)
    d = mat.shape[0]
    right = (mat.reshape(-1, 2**n) @ hn).reshape(d, d)
    return (right.T.reshape(-1, 2**n) @ hn).reshape(d, d).T


def evolve(o: LiftedSimonOracle, spec: NoisyCircuitSpec) -> np.ndarray:
    """Final density matrix on ``3n`` qubits starting from ``|0>``."""
    n = o.n
    _check_n(n)
    d = 2 ** (3 * n)
    rho = np.zeros((d, d))
    rho[0, 0] = 1.0
    perm = oracle_permutation(o)
    for i, layer in enumerate(spec.layers):
        if i > 0:
            rho = depolarize_array(rho, spec.lam)
        if layer == "hadamard":
            rho = _hadamard_low(rho, n)
        elif layer == "oracle":
            rho = apply_permutation(rho, perm)
    return rho


def output_distribution(o: LiftedSimonOracle, lam: float, depth: int = 1, oracle: bool = True) -> np.ndarray:
    """Probabilities of all ``3n``-bit measurement outcomes."""
    layers = circuit_layers(depth)
    if not oracle:
        layers = [("identity-oracle" if layer == "oracle" else layer) for layer in layers]
    probs = np.clip(np.diag(evolve(o, NoisyCircuitSpec(tuple(layers), lam))), 0.0, None)
    return probs / probs.sum()


def query_distribution(o: LiftedSimonOracle, lam: float) -> np.ndarray:
    """Distribution of the measured query register after one noisy query."""
    full = output_distribution(o, lam)
    return full.reshape(-1, 2**o.n).sum(axis=0)


def unlifted_query_distribution(o: LiftedSimonOracle) -> np.ndarray:
    """Noiseless textbook Simon query on ``2n`` qubits (query register low, output high)."""
    n = o.n
    N = 2**n
    psi = np.zeros((N, N))  # psi[y, x]
    psi[np.array(o.f_table), np.arange(N)] = 1.0 / np.sqrt(N)
    psi = psi @ kron_all([H] * n).T
    return (psi**2).sum(axis=0)


def canonical_instance(n: int) -> LiftedSimonOracle:
    """Period ``1...1`` with ``f(x) = min(x, x xor s)``."""
    _check_n(n)
    s = 2**n - 1
    return LiftedSimonOracle(n, tuple(min(x, x ^ s) for x in range(2**n)), s)


def tv_oracle_vs_identity(n: int, lam: float, depth: int = 1, oracle: LiftedSimonOracle | None = None) -> float:
    """Exact total variation between the full ``3n``-bit outcome distributions with the real and identity oracle.

    Defaults to :func:`canonical_instance`. At these small sizes the value
    depends on the instance and need not shrink with ``n`` for every one.
    """
    _check_n(n)
    o = oracle if oracle is not None else canonical_instance(n)
    if o.n != n:
        raise ValueError("oracle size does not match n")
    p = output_distribution(o, lam, depth, oracle=True)
    q = output_distribution(o, lam, depth, oracle=False)
    return 0.5 * float(np.abs(p - q).sum())


def gf2_rank_and_null(rows: np.ndarray, n: int) -> tuple[int, list[int]]:
    """Rank of the given ``n``-bit words over F2 and a basis of their orthogonal complement."""
    pivots: dict[int, int] = {}  # pivot bit -> reduced row
    for word in (int(w) for w in rows):
        for bit, row in pivots.items():
            if (word >> bit) & 1:
                word ^= row
        if word:
            bit = word.bit_length() - 1
            for b in list(pivots):
                if (pivots[b] >> bit) & 1:
                    pivots[b] ^= word
            pivots[bit] = word
    free = [b for b in range(n) if b not in pivots]
    null = []
    for f in free:
        v = 1 << f
        for bit, row in pivots.items():
            if (row >> f) & 1:
                v |= 1 << bit
        null.append(v)
    return len(pivots), null


def recover_secret(ys, n: int) -> int | None:
    """The unique nonzero ``s`` with ``y . s = 0`` for all ``ys``, if the rank is exactly ``n - 1``."""
    rank, null = gf2_rank_and_null(np.asarray(list(ys), dtype=np.int64), n)
    return null[0] if rank == n - 1 else None


@dataclass(frozen=True)
class SimonRun:
    secret: int | None
    recovered: int | None
    samples: tuple[int, ...]

    @property
    def success(self) -> bool:
        return self.recovered is not None and self.recovered == self.secret


def run_noisy_simon(o: LiftedSimonOracle, lam: float, queries: int, rng: np.random.Generator) -> SimonRun:
    """Repeat the noisy one-query circuit ``queries`` times and solve for the period."""
    if queries < o.n - 1:
        raise ValueError(f"need at least n - 1 = {o.n - 1} queries, got {queries}")
    probs = query_distribution(o, lam)
    ys = rng.choice(probs.size, size=queries, p=probs)
    return SimonRun(o.secret, recover_secret(ys, o.n), tuple(int(y) for y in ys))


def blind_guess_rate(n: int) -> float:
    return 1.0 / (2**n - 1)
