"""
Hexagonal HaPPY-style tiling, boundary erasures and greedy inward decoding.

Radius 0 is a single central tile whose six legs each reach a radius-1
tile. Every other tile has six legs and comes in two kinds:

* ``one-parent`` (1 inward leg, 5 outward legs): three outward legs feed
  private one-parent children and the first and last feed two-parent
  children shared with the neighbouring one-parent tiles of the ring;
* ``two-parent`` (2 inward legs, 4 outward legs): all four feed private
  one-parent children.

This reproduces ``x_k = 3 x_{k-1} + 4 y_{k-1}`` one-parent and
``y_k = x_{k-1}`` two-parent tiles at radius ``k``, and the number of legs
between radius ``r`` and ``r+1`` is ``5 x_r + 4 y_r``. Outward legs of the
radius-``R`` tiles are the physical boundary.

Each tile is a six-leg perfect tensor, so any three known legs determine
the other three. The greedy decoder marks a tile's inward legs recoverable
when at least three of its outward legs are.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapacityError, DomainError
from .noise import erasure_mask

MAX_RADIUS = 8
PHI = (1 + math.sqrt(5)) / 2
_TRIAL_CHUNK = 2048


@dataclass(frozen=True)
class Tile:
    id: int
    radius: int
    kind: str  # "center", "one-parent" or "two-parent"
    parent_legs: tuple[int, ...]
    child_legs: tuple[int, ...]


@dataclass(frozen=True)
class Leg:
    id: int
    inner: int  # tile on the inward side
    outer: int | None  # tile on the outward side; None on the boundary


@dataclass(frozen=True)
class Tiling:
    R: int
    tiles: tuple[Tile, ...]
    legs: tuple[Leg, ...]
    _groups: dict = field(default_factory=dict, repr=False, compare=False)

    def tiles_at(self, k: int) -> list[Tile]:
        return [t for t in self.tiles if t.radius == k]

    def count(self, k: int, kind: str) -> int:
        return sum(1 for t in self.tiles if t.radius == k and t.kind == kind)

    def legs_outward_of(self, k: int) -> list[int]:
        """Legs joining radius ``k`` to radius ``k+1`` (the boundary when ``k == R``)."""
        return [leg for t in self.tiles_at(k) for leg in t.child_legs]

    @cached_property
    def boundary_legs(self) -> np.ndarray:
        return np.array(self.legs_outward_of(self.R), dtype=np.int64)

    def decode_groups(self, k: int) -> list[tuple[np.ndarray, np.ndarray]]:
        """``(child_leg_matrix, parent_leg_matrix)`` per tile kind at radius ``k``."""
        if k not in self._groups:
            groups = []
            for kind in ("one-parent", "two-parent"):
                ts = [t for t in self.tiles_at(k) if t.kind == kind]
                if ts:
                    groups.append((np.array([t.child_legs for t in ts]), np.array([t.parent_legs for t in ts])))
            self._groups[k] = groups
        return self._groups[k]


def tile_counts(k: int) -> tuple[int, int]:
    """``(x_k, y_k)`` from the recurrence, with ``(x_0, y_0) = (0, 0)`` for the centre."""
    if k < 0:
        raise ValueError("radius must be non-negative")
    if k == 0:
        return 0, 0
    x, y = 6, 0
    for _ in range(k - 1):
        x, y = 3 * x + 4 * y, x
    return x, y


def bulk_leg_count(r: int) -> int:
    """Legs left dangling after cutting out the disc of radius ``r``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    if r == 0:
        return 6
    return round(144 / 5 * 4 ** (r - 1) + 6 / 5 * (-1) ** (r - 1))


def build_tiling(R: int) -> Tiling:
    if not 1 <= R <= MAX_RADIUS:
        raise CapacityError(f"tiling radius must lie in [1, {MAX_RADIUS}], got {R}")
    tiles: list[Tile] = []
    legs: list[list] = []  # [id, inner, outer]

    def new_tile(radius: int, kind: str, parents: tuple[int, ...]) -> Tile:
        tid = len(tiles)
        for leg in parents:
            legs[leg][2] = tid
        n_child = {"center": 6, "one-parent": 5, "two-parent": 4}[kind]
        children = tuple(range(len(legs), len(legs) + n_child))
        legs.extend([leg, tid, None] for leg in children)
        tile = Tile(tid, radius, kind, parents, children)
        tiles.append(tile)
        return tile

    center = new_tile(0, "center", ())
    ring = [new_tile(1, "one-parent", (leg,)) for leg in center.child_legs]
    for k in range(2, R + 1):
        ones = [i for i, t in enumerate(ring) if t.kind == "one-parent"]
        next_one = {i: ones[(j + 1) % len(ones)] for j, i in enumerate(ones)}
        nxt = []
        for i, t in enumerate(ring):
            if t.kind == "one-parent":
                for leg in t.child_legs[1:4]:
                    nxt.append(new_tile(k, "one-parent", (leg,)))
                partner = ring[next_one[i]]
                nxt.append(new_tile(k, "two-parent", (t.child_legs[4], partner.child_legs[0])))
            else:
                for leg in t.child_legs:
                    nxt.append(new_tile(k, "one-parent", (leg,)))
        ring = nxt
    return Tiling(R, tuple(tiles), tuple(Leg(i, a, b) for i, a, b in legs))


@dataclass(frozen=True)
class ErasurePattern:
    erased: frozenset[int]

    def validate(self, tiling: Tiling) -> None:
        extra = self.erased - set(tiling.boundary_legs.tolist())
        if extra:
            raise ValueError(f"erasures on non-boundary legs: {sorted(extra)[:5]}")

    def mask(self, tiling: Tiling) -> np.ndarray:
        self.validate(tiling)
        return np.isin(tiling.boundary_legs, list(self.erased))


def _check_radii(tiling: Tiling, r: int) -> None:
    if not 1 <= r < tiling.R:
        raise DomainError(f"need 1 <= r < R = {tiling.R}, got r = {r}")


def greedy_decode_batch(tiling: Tiling, erased: np.ndarray, r: int) -> np.ndarray:
    """Vectorised decoder: ``erased`` is a boolean ``(trials, boundary)`` mask."""
    _check_radii(tiling, r)
    erased = np.atleast_2d(np.asarray(erased, dtype=bool))
    if erased.shape[1] != tiling.boundary_legs.size:
        raise ValueError("mask width must equal the number of boundary legs")
    known = np.zeros((erased.shape[0], len(tiling.legs)), dtype=bool)
    known[:, tiling.boundary_legs] = ~erased
    for k in range(tiling.R, r, -1):
        for children, parents in tiling.decode_groups(k):
            ok = known[:, children].sum(axis=2) >= 3
            known[:, parents] = ok[:, :, None]
    inner = np.array(tiling.legs_outward_of(r))
    return known[:, inner].all(axis=1)


def greedy_decode(tiling: Tiling, erasures: ErasurePattern | np.ndarray, r: int) -> bool:
    mask = erasures.mask(tiling) if isinstance(erasures, ErasurePattern) else erasures
    return bool(greedy_decode_batch(tiling, mask[None, :], r)[0])


def failure_bound(r: int, R: int, lam: float) -> float:
    """``min(1, (30 4^{r-1} / 12) (12 lam)^{phi^{R-r}})``."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"erasure rate must lie in [0, 1], got {lam}")
    return min(1.0, 30 * 4 ** (r - 1) / 12 * (12 * lam) ** (PHI ** (R - r)))


def decode_failure_rate(tiling: Tiling, r: int, rate: float, trials: int, rng: np.random.Generator) -> float:
    fails = 0
    for start in range(0, trials, _TRIAL_CHUNK):
        k = min(_TRIAL_CHUNK, trials - start)
        mask = erasure_mask(tiling.boundary_legs.size, rate, rng, size=k)
        fails += int(np.count_nonzero(~greedy_decode_batch(tiling, mask, r)))
    return fails / trials


@dataclass(frozen=True)
class BlackHoleReport:
    R: int
    r: int
    rate: float
    trials: int
    swap_reps: int
    decode_fail_rate: float
    bound: float
    success_rate: float

    def row(self) -> dict:
        return {"R": self.R, "r": self.r, "rate": self.rate, "trials": self.trials,
                "decode_fail_rate": self.decode_fail_rate, "bound": self.bound,
                "success_rate": self.success_rate}


def swap_accept_probability(logical_qubits: int, pure: bool) -> float:
    return 1.0 if pure else 0.5 + 2.0 ** (-logical_qubits - 1)


def predicted_success(rate_fail_both: float, logical_qubits: int, swap_reps: int) -> float:
    """Success of the all-accept rule given the chance that both decodes succeed."""
    mixed_ok = 1.0 - swap_accept_probability(logical_qubits, False) ** swap_reps
    return rate_fail_both * 0.5 * (1.0 + mixed_ok) + (1.0 - rate_fail_both) * 0.5


def black_hole_experiment(R: int, r: int, rate: float, trials: int, rng: np.random.Generator,
                          swap_reps: int = 5, tiling: Tiling | None = None) -> BlackHoleReport:
    """Two-copy purity detection of the bulk state behind an erased boundary.

    Each trial picks a pure or maximally mixed logical state on the
    ``L_r`` legs, erases both copies' boundaries independently and decodes
    each. When both decodes succeed, ``swap_reps`` SWAP tests run on the
    recovered logical copies and the state is called pure iff every test
    accepts (a maximally mixed state fails a test with probability just
    under 1/2, a pure one never does). When either decode fails the
    answer is a fair coin.
    """
    tiling = tiling if tiling is not None else build_tiling(R)
    if tiling.R != R:
        raise ValueError("tiling radius does not match R")
    _check_radii(tiling, r)
    if trials < 1 or swap_reps < 1:
        raise ValueError("trials and swap_reps must be positive")
    L = bulk_leg_count(r)
    nb = tiling.boundary_legs.size
    wins = decode_fails = 0
    for start in range(0, trials, _TRIAL_CHUNK):
        k = min(_TRIAL_CHUNK, trials - start)
        pure = rng.random(k) < 0.5
        ok_a = greedy_decode_batch(tiling, erasure_mask(nb, rate, rng, size=k), r)
        ok_b = greedy_decode_batch(tiling, erasure_mask(nb, rate, rng, size=k), r)
        decode_fails += int(np.count_nonzero(~ok_a) + np.count_nonzero(~ok_b))
        accept_p = np.where(pure, swap_accept_probability(L, True), swap_accept_probability(L, False))
        all_accept = (rng.random((k, swap_reps)) < accept_p[:, None]).all(axis=1)
        coin = rng.random(k) < 0.5
        said_pure = np.where(ok_a & ok_b, all_accept, coin)
        wins += int(np.count_nonzero(said_pure == pure))
    return BlackHoleReport(R, r, rate, trials, swap_reps, decode_fails / (2 * trials),
                           failure_bound(r, R, rate), wins / trials)
