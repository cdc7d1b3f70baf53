import math

import numpy as np
import pytest

from simplexwidth import EuclideanSimplex, regular_simplex, regularity_distance
from simplexwidth.ascent import (
    ascend,
    centroid_map,
    check_necessary_conditions,
    circumcenter_spread,
    lloyd_step,
    verify_switch_point,
    verify_switch_region,
)
from simplexwidth.errors import EmptyCell, NotCovering
from simplexwidth.meanwidth import mean_width_mc
from simplexwidth.simplex import perturbed_regular
from simplexwidth.strips import cap, centroid

from conftest import random_covering, random_unit


def _non_covering():
    v = np.array([[1.0, 0, 0], [0.8, 0.6, 0], [0.8, 0, 0.6], [0.6, 0.48, 0.64]])
    return EuclideanSimplex(v / np.linalg.norm(v, axis=1, keepdims=True))


def test_regular_simplex_is_a_fixed_point():
    s = regular_simplex(3)
    new = lloyd_step(s, n=10**6, seed=1)
    assert np.max(np.arccos(np.clip(np.sum(new.vertices * s.vertices, axis=1), -1, 1))) < 1e-3


def test_regular_start_converges_in_one_step():
    traj = ascend(regular_simplex(4), n=10**6, seed=0)
    assert traj.converged and traj.iterations == 1
    assert len(traj.steps) == 2


def test_lloyd_step_does_not_decrease_width(rng):
    s = EuclideanSimplex(random_covering(rng, 3))
    new = lloyd_step(s, n=10**6, seed=2)
    a, b = mean_width_mc(s, 10**6, 3), mean_width_mc(new, 10**6, 3)
    assert b.value > a.value - 3 * math.hypot(a.std_error, b.std_error)


def test_ascent_from_perturbed_start():
    traj = ascend(perturbed_regular(3, 0.4, seed=1), tol=1e-3, n=10**6, seed=5)
    assert traj.converged
    assert traj.final.regularity < 1e-2
    assert traj.is_monotone()
    assert traj.steps[0].movement == 0.0
    assert traj.mean_widths()[-1] > traj.mean_widths()[0]


def test_ascent_reports_non_convergence():
    traj = ascend(perturbed_regular(3, 0.8, seed=2), tol=1e-9, max_iters=3, n=10**5, seed=0)
    assert not traj.converged
    assert traj.iterations == 3
    assert len(traj.steps) == 4


def test_ascent_is_reproducible():
    s = perturbed_regular(3, 0.5, seed=3)
    a = ascend(s, max_iters=4, n=10**5, seed=9)
    b = ascend(s, max_iters=4, n=10**5, seed=9)
    assert np.array_equal(a.final.simplex.vertices, b.final.simplex.vertices)
    assert list(a.mean_widths()) == list(b.mean_widths())


def test_non_covering_start():
    with pytest.raises(NotCovering):
        ascend(_non_covering())
    with pytest.raises(NotCovering):
        centroid_map(_non_covering(), 10**4, 0)


def test_starved_cell_raises():
    # six cells sharing 30 samples: some cell gets fewer than 10
    with pytest.raises(EmptyCell):
        centroid_map(regular_simplex(5), 30, 0)


def test_switch_region_voronoi_equality(rng):
    s = EuclideanSimplex(random_covering(rng, 4))
    r = verify_switch_region(s, lambda x: np.argmax(x @ s.vertices.T, axis=1), 50_000, 1)
    assert r.lhs == r.rhs and r.holds and r.gap == 0.0


def test_switch_region_random_partition(rng):
    s = EuclideanSimplex(random_covering(rng, 3))
    r = verify_switch_region(s, lambda x: (x[:, 0] > 0).astype(int), 50_000, 2)
    assert r.holds and r.gap > 0


def test_switch_region_rejects_bad_labels(rng):
    s = EuclideanSimplex(random_covering(rng, 3))
    with pytest.raises(ValueError):
        verify_switch_region(s, lambda x: np.full(len(x), 7), 2000, 0)


def test_switch_point(rng):
    region = cap([0.3, 0.2, 0.9], 0.2)
    g = centroid(region, 50_000, 3).direction
    eq = verify_switch_point(region, g, 50_000, 3)
    assert eq.lhs == pytest.approx(eq.rhs, abs=1e-15)
    for x in random_unit(rng, 20, 3):
        assert verify_switch_point(region, x, 50_000, 3).holds


@pytest.mark.parametrize("d", [3, 4, 6])
def test_necessary_conditions_for_regular(d):
    nc = check_necessary_conditions(regular_simplex(d))
    assert nc.all_hold
    assert nc.ball_radius == pytest.approx(1.0)
    assert set(nc.to_dict()) >= {"smallest_ball_is_unit", "hemispheres_cover", "ball_radius"}


def test_necessary_conditions_fail_off_the_ball():
    nc = check_necessary_conditions(_non_covering())
    assert not nc.hemispheres_cover and not nc.smallest_ball_is_unit
    assert nc.ball_radius < 1


def test_circumcenter_spread():
    assert circumcenter_spread(regular_simplex(5)) < 1e-12
    assert circumcenter_spread(perturbed_regular(3, 0.3)) > 1e-3
    assert regularity_distance(regular_simplex(5)) < 1e-12
