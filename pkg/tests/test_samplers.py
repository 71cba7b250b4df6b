"""Sampler strategies: lattice structure, stratification, maximin greed,
minimum-distance guarantees, and seed determinism."""

import numpy as np
import pytest

from failcover.core import SearchSpace, unit_box
from failcover.samplers import (
    fps_sample,
    grid_sample,
    grid_step_diagonal,
    lhs_sample,
    make_rng,
    poisson_disc_sample,
    sample_by_name,
    uniform_sample,
)


def brute_force_fps(pool: np.ndarray, n: int, center: np.ndarray) -> np.ndarray:
    """Exhaustive greedy maximin, the oracle fps_sample must reproduce."""
    first = min(range(len(pool)), key=lambda i: (np.linalg.norm(pool[i] - center), i))
    chosen = [first]
    for _ in range(n - 1):
        best, best_d = None, -1.0
        for i in range(len(pool)):
            d = min(np.linalg.norm(pool[i] - pool[j]) for j in chosen)
            if d > best_d:
                best, best_d = i, d
        chosen.append(best)
    return pool[chosen]


# --- grid ---------------------------------------------------------------------


def test_grid_1d_endpoints():
    batch = grid_sample(unit_box(1), k=3)
    np.testing.assert_allclose(batch.points.ravel(), [0.0, 0.5, 1.0])


def test_grid_count_is_k_pow_n():
    assert len(grid_sample(unit_box(3), k=25)) == 15_625
    assert len(grid_sample(unit_box(2), k=10)) == 100


def test_grid_min_axis_step():
    pts = grid_sample(unit_box(2), k=10).points
    xs = np.unique(pts[:, 0])
    np.testing.assert_allclose(np.diff(xs).min(), 1.0 / 9.0)


def test_grid_row_major_order():
    pts = grid_sample(unit_box(2), k=2).points
    np.testing.assert_allclose(pts, [[0, 0], [0, 1], [1, 0], [1, 1]])


def test_grid_rejects_small_k():
    with pytest.raises(ValueError, match="at least 2"):
        grid_sample(unit_box(2), k=1)


def test_grid_step_diagonal():
    space = SearchSpace(((0.0, 1.0), (0.0, 2.0)))
    expected = np.hypot(1.0 / 9.0, 2.0 / 9.0)
    assert grid_step_diagonal(space, 10) == pytest.approx(expected)


# --- latin hypercube ------------------------------------------------------------


def test_lhs_single_point_in_box():
    space = SearchSpace(((2.0, 3.0), (-1.0, 0.0)))
    pts = lhs_sample(space, 1, make_rng(1)).points
    assert pts.shape == (1, 2)
    assert space.contains(pts[0])


def test_lhs_1d_stratification():
    pts = lhs_sample(unit_box(1), 4, make_rng(2)).points.ravel()
    occupied = sorted(int(v * 4) for v in pts)
    assert occupied == [0, 1, 2, 3]


def test_lhs_per_axis_occupancy_exactly_one():
    n = 40
    pts = lhs_sample(unit_box(3), n, make_rng(3)).points
    for axis in range(3):
        counts = np.histogram(pts[:, axis], bins=n, range=(0.0, 1.0))[0]
        assert np.all(counts == 1)


def test_lhs_determinism():
    a = lhs_sample(unit_box(2), 16, make_rng(7)).points
    b = lhs_sample(unit_box(2), 16, make_rng(7)).points
    np.testing.assert_array_equal(a, b)


# --- furthest point sampling -----------------------------------------------------


def test_fps_first_point_nearest_center():
    space = unit_box(2)
    pool = make_rng(11).uniform(0, 1, size=(200, 2))
    batch = fps_sample(space, 1, make_rng(0), pool=pool)
    expected = pool[np.argmin(np.linalg.norm(pool - 0.5, axis=1))]
    np.testing.assert_array_equal(batch.points[0], expected)


def test_fps_second_point_is_corner_on_grid_pool():
    space = unit_box(2)
    pool = grid_sample(space, 11).points
    batch = fps_sample(space, 2, make_rng(0), pool=pool)
    np.testing.assert_allclose(batch.points[0], [0.5, 0.5])
    corners = {(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)}
    assert tuple(batch.points[1]) in corners


@pytest.mark.parametrize("dims, pool_size, n", [(1, 50, 6), (2, 200, 12), (3, 400, 9)])
def test_fps_matches_brute_force_oracle(dims, pool_size, n):
    space = unit_box(dims)
    pool = make_rng(100 + dims).uniform(0, 1, size=(pool_size, dims))
    got = fps_sample(space, n, make_rng(0), pool=pool).points
    want = brute_force_fps(pool, n, space.center)
    np.testing.assert_array_equal(got, want)


def test_fps_random_pool_determinism_and_bounds():
    space = SearchSpace(((0.0, 2.0), (1.0, 4.0)))
    a = fps_sample(space, 20, make_rng(5), candidate_pool_size=500).points
    b = fps_sample(space, 20, make_rng(5), candidate_pool_size=500).points
    np.testing.assert_array_equal(a, b)
    assert all(space.contains(p) for p in a)


def test_fps_pool_must_cover_n():
    with pytest.raises(ValueError, match="pool"):
        fps_sample(unit_box(2), 10, make_rng(0), candidate_pool_size=5)


# --- poisson disc -----------------------------------------------------------------


def test_poisson_oversized_radius_single_point():
    batch = poisson_disc_sample(unit_box(2), r=5.0, rng=make_rng(1))
    assert len(batch) == 1


@pytest.mark.parametrize("dims", [1, 2, 3])
def test_poisson_min_distance_invariant(dims):
    batch = poisson_disc_sample(unit_box(dims), r=0.25, rng=make_rng(dims))
    pts = batch.points
    for i in range(len(pts)):
        d = np.linalg.norm(pts[i + 1 :] - pts[i], axis=1)
        assert np.all(d >= 0.25)


def test_poisson_count_envelope_2d():
    # Envelope measured once for r=0.1 on the unit square, then frozen.
    counts = [len(poisson_disc_sample(unit_box(2), r=0.1, rng=make_rng(s))) for s in range(20)]
    assert min(counts) >= 30 and max(counts) <= 120


def test_poisson_determinism():
    a = poisson_disc_sample(unit_box(2), r=0.2, rng=make_rng(9)).points
    b = poisson_disc_sample(unit_box(2), r=0.2, rng=make_rng(9)).points
    np.testing.assert_array_equal(a, b)


def test_poisson_rejects_bad_params():
    with pytest.raises(ValueError, match="positive"):
        poisson_disc_sample(unit_box(2), r=0.0, rng=make_rng(0))
    with pytest.raises(ValueError, match="attempts"):
        poisson_disc_sample(unit_box(2), r=0.1, rng=make_rng(0), attempts_per_point=0)


# --- uniform ------------------------------------------------------------------------


def test_uniform_thin_axis():
    space = SearchSpace(((0.0, 1e-12), (0.0, 1.0)))
    pts = uniform_sample(space, 50, make_rng(4)).points
    assert np.all(np.abs(pts[:, 0]) <= 1e-12)


def test_uniform_mean_near_center():
    pts = uniform_sample(unit_box(1), 1000, make_rng(8)).points
    assert abs(pts.mean() - 0.5) < 0.05  # 3 sigma of U[0,1] sample mean


def test_uniform_determinism():
    a = uniform_sample(unit_box(3), 64, make_rng(12)).points
    b = uniform_sample(unit_box(3), 64, make_rng(12)).points
    np.testing.assert_array_equal(a, b)


# --- shared properties ----------------------------------------------------------------


@pytest.mark.parametrize(
    "strategy, params",
    [
        ("grid", {"k": 4}),
        ("lhs", {"n": 25, "seed": 3}),
        ("uniform", {"n": 25, "seed": 3}),
        ("fps", {"n": 10, "candidate_pool_size": 300, "seed": 3}),
        ("poisson", {"r": 0.4, "seed": 3}),
    ],
)
def test_all_strategies_in_bounds(strategy, params):
    space = SearchSpace(((-1.0, 2.0), (0.5, 0.75)))
    batch = sample_by_name(space, strategy, params)
    assert len(batch) >= 1
    assert all(space.contains(p) for p in batch.points)
    assert batch.strategy_label == strategy


def test_unknown_strategy_rejected():
    with pytest.raises(ValueError, match="unknown sampling strategy"):
        sample_by_name(unit_box(2), "sobol", {})


def test_make_rng_substreams_differ():
    a = make_rng(1).random(4)
    b = make_rng(1, 1).random(4)
    assert not np.array_equal(a, b)
