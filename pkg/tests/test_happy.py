import itertools

import numpy as np
import pytest

from noisylearn.errors import CapacityError, DomainError
from noisylearn.happy import (ErasurePattern, black_hole_experiment, build_tiling, bulk_leg_count,
                              decode_failure_rate, failure_bound, greedy_decode, greedy_decode_batch,
                              predicted_success, tile_counts)


@pytest.mark.parametrize("R", range(1, 7))
def test_census_matches_recurrence(R):
    t = build_tiling(R)
    for k in range(1, R + 1):
        x, y = tile_counts(k)
        assert t.count(k, "one-parent") == x
        assert t.count(k, "two-parent") == y
    x, y = tile_counts(R)
    assert t.boundary_legs.size == 5 * x + 4 * y
    for r in range(0, R):
        assert len(t.legs_outward_of(r)) == bulk_leg_count(r)


def test_tile_shapes():
    t = build_tiling(4)
    for tile in t.tiles:
        assert len(tile.parent_legs) + len(tile.child_legs) == 6
        want = {"center": 0, "one-parent": 1, "two-parent": 2}[tile.kind]
        assert len(tile.parent_legs) == want


def test_closed_forms():
    assert tile_counts(1) == (6, 0)
    assert tile_counts(2) == (18, 6)
    assert tile_counts(3)[0] == 78
    assert [bulk_leg_count(r) for r in range(4)] == [6, 30, 114, 462]


def test_bound_examples():
    assert failure_bound(1, 3, 1 / 48) == pytest.approx(0.066, abs=5e-4)
    assert failure_bound(1, 3, 0.0) == 0.0
    grid = [failure_bound(1, 4, lam) for lam in np.linspace(0, 0.2, 41)]
    assert all(a <= b for a, b in zip(grid, grid[1:]))


def test_decoder_extremes():
    t = build_tiling(3)
    nb = t.boundary_legs.size
    assert greedy_decode(t, np.zeros(nb, bool), 1)
    assert not greedy_decode(t, np.ones(nb, bool), 1)
    assert greedy_decode(t, ErasurePattern(frozenset()), 2)


def test_decoder_errors():
    t = build_tiling(3)
    with pytest.raises(DomainError):
        greedy_decode(t, np.zeros(t.boundary_legs.size, bool), 3)
    with pytest.raises(ValueError):
        ErasurePattern(frozenset({0})).validate(t)  # leg 0 belongs to the centre
    with pytest.raises(CapacityError):
        build_tiling(9)


def test_rule_on_one_tile():
    """With R=2, r=1 each outer tile's parent legs survive iff at least 3 child legs do."""
    t = build_tiling(2)
    tiles = t.tiles_at(2)
    boundary = list(t.boundary_legs)
    for tile in tiles[:3]:
        cols = [boundary.index(leg) for leg in tile.child_legs]
        for pattern in itertools.product([False, True], repeat=len(cols)):
            mask = np.zeros(len(boundary), bool)
            mask[cols] = pattern
            assert greedy_decode(t, mask, 1) == (len(cols) - sum(pattern) >= 3)


def test_monotone_single_additions_exhaustive_r2():
    t = build_tiling(2)
    nb = t.boundary_legs.size
    rng = np.random.default_rng(11)
    base = rng.random((400, nb)) < 0.3
    ok = greedy_decode_batch(t, base, 1)
    for leg in range(nb):
        more = base.copy()
        more[:, leg] = True
        assert not np.any(greedy_decode_batch(t, more, 1) & ~ok)


def test_monotone_random_pairs_r4(rng):
    t = build_tiling(4)
    nb = t.boundary_legs.size
    base = rng.random((2000, nb)) < 0.15
    more = base | (rng.random((2000, nb)) < 0.05)
    assert not np.any(greedy_decode_batch(t, more, 1) & ~greedy_decode_batch(t, base, 1))


@pytest.mark.parametrize("R", [3, 4])
@pytest.mark.parametrize("lam", [1 / 60, 1 / 48, 0.01])
def test_bound_dominance(R, lam, rng):
    t = build_tiling(R)
    rate = decode_failure_rate(t, 1, lam, 10_000, rng)
    bound = failure_bound(1, R, lam)
    assert rate <= bound + 3 * np.sqrt(max(bound * (1 - bound), 1e-12) / 10_000)


def test_black_hole_matches_prediction(rng):
    t = build_tiling(3)
    rep = black_hole_experiment(3, 1, 0.08, 20_000, rng, tiling=t)
    fail_one = decode_failure_rate(t, 1, 0.08, 50_000, np.random.default_rng(5))
    p = predicted_success((1 - fail_one) ** 2, bulk_leg_count(1), 5)
    assert abs(rep.success_rate - p) <= 3 * np.sqrt(p * (1 - p) / 20_000) + 0.005


def test_black_hole_regimes(rng):
    clean = black_hole_experiment(4, 1, 0.0, 20_000, rng)
    assert clean.decode_fail_rate == 0.0
    exact = predicted_success(1.0, 30, 5)
    assert abs(clean.success_rate - exact) <= 3 * np.sqrt(exact * (1 - exact) / 20_000)
    noisy = black_hole_experiment(3, 1, 0.5, 5000, rng)
    assert abs(noisy.success_rate - 0.5) < 0.04


def test_black_hole_report_row(rng):
    row = black_hole_experiment(3, 1, 0.01, 100, rng).row()
    assert list(row) == ["R", "r", "rate", "trials", "decode_fail_rate", "bound", "success_rate"]
