import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from simplexwidth import (
    EuclideanSimplex,
    SphericalSimplex,
    circumcenters,
    regular_simplex,
    regularity_distance,
    support,
    voronoi_assign,
)
from simplexwidth.errors import DegenerateFace, DegenerateSimplex, SingularGenerators
from simplexwidth.simplex import gram, perturbed_regular, regular_gram
from simplexwidth.sphere import random_orthogonal

from conftest import random_unit


@pytest.mark.parametrize("d", [3, 4, 5, 8])
def test_regular_simplex_gram(d):
    s = regular_simplex(d)
    g = gram(s)
    off = g[~np.eye(d + 1, dtype=bool)]
    np.testing.assert_allclose(off, -1.0 / d, atol=1e-12)
    np.testing.assert_allclose(np.diag(g), 1.0, atol=1e-12)
    np.testing.assert_allclose(s.vertices[0], np.eye(d)[0], atol=1e-12)
    assert regularity_distance(s) < 1e-12


def test_regular_gram_values():
    g = regular_gram(3)
    assert g[0, 0] == pytest.approx(1.0)
    assert g[0, 1] == pytest.approx(-1 / 3)


@given(st.integers(3, 6), st.integers(0, 10**6))
def test_regularity_distance_is_rotation_invariant(d, seed):
    rng = np.random.default_rng(seed)
    s = EuclideanSimplex(random_unit(rng, d + 1, d))
    q = random_orthogonal(d, seed)
    assert regularity_distance(s.rotated(q)) == pytest.approx(regularity_distance(s), abs=1e-10)


def test_perturbed_regular_moves_away():
    p = perturbed_regular(4, 0.3, seed=1)
    assert regularity_distance(p) > 0.1
    assert regularity_distance(perturbed_regular(4, 0.0, seed=1)) < 1e-12


def test_constructor_checks():
    with pytest.raises(DegenerateSimplex):
        EuclideanSimplex(np.eye(3))
    with pytest.raises(DegenerateSimplex):
        EuclideanSimplex(2 * regular_simplex(3).vertices)
    flat = np.array([[1.0, 0, 0], [0, 1.0, 0], [-1.0, 0, 0], [0, -1.0, 0]])
    with pytest.raises(DegenerateSimplex):
        EuclideanSimplex(flat)
    with pytest.raises(DegenerateSimplex):
        EuclideanSimplex(np.array([[1.0, 0], [-1.0, 0], [0, 1.0]]))


def test_test_mode_admits_points_and_segments():
    seg = EuclideanSimplex(np.array([[1.0, 0, 0], [-1.0, 0, 0]]), test_mode=True)
    assert len(seg) == 2 and seg.dim == 3


def test_vertices_are_read_only():
    s = regular_simplex(3)
    with pytest.raises(ValueError):
        s.vertices[0, 0] = 2.0


def test_support_and_voronoi(rng):
    s = regular_simplex(3)
    x = random_unit(rng, 1000, 3)
    dots = x @ s.vertices.T
    np.testing.assert_array_equal(support(s, x), dots.max(axis=1))
    np.testing.assert_array_equal(voronoi_assign(s, x), dots.argmax(axis=1))


def test_voronoi_tie_goes_to_lowest_index():
    s = EuclideanSimplex(np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0], -np.ones(3) / np.sqrt(3)]))
    x = np.array([[1.0, 1.0, 0.0]]) / np.sqrt(2)
    assert voronoi_assign(s, x)[0] == 0


@pytest.mark.parametrize("d", [3, 4, 6])
def test_regular_circumcenters_are_antipodes(d):
    s = regular_simplex(d)
    np.testing.assert_allclose(circumcenters(s), -s.vertices, atol=1e-12)


def test_circumcenter_equidistant(rng):
    s = EuclideanSimplex(random_unit(rng, 5, 4))
    c = circumcenters(s)
    for i in range(5):
        face = np.delete(s.vertices, i, axis=0)
        dots = face @ c[i]
        np.testing.assert_allclose(dots, dots[0], atol=1e-12)


def test_degenerate_face():
    # face through a great circle: its circumcenter is the origin
    v = np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
    with pytest.raises(DegenerateFace):
        circumcenters(EuclideanSimplex(v))


def test_spherical_simplex_contains():
    ss = SphericalSimplex(np.eye(3))
    assert ss.contains(np.array([1.0, 1.0, 1.0]) / np.sqrt(3))
    assert not ss.contains(np.array([-1.0, 1.0, 1.0]) / np.sqrt(3))
    assert np.all(ss.contains(ss.generators))


def test_spherical_simplex_projects_and_checks():
    ss = SphericalSimplex(2 * np.eye(3))
    np.testing.assert_allclose(ss.generators, np.eye(3))
    with pytest.raises(SingularGenerators):
        SphericalSimplex(np.array([[1.0, 0, 0], [0, 1.0, 0], [1.0, 1.0, 0]]))


def test_octant_measure_is_one_eighth():
    from simplexwidth import sample_uniform

    x = sample_uniform(3, 400_000, seed=11)
    p = SphericalSimplex(np.eye(3)).contains(x).mean()
    assert abs(p - 0.125) < 3 * np.sqrt(0.125 * 0.875 / len(x))


def test_support_examples():
    s = regular_simplex(3)
    assert support(s, s.vertices[0]) == pytest.approx(1.0)
    assert support(s, -s.vertices[0]) == pytest.approx(1 / 3)


def test_support_against_barycentric_grid(rng):
    from itertools import product

    s = EuclideanSimplex(random_unit(rng, 4, 3))
    steps = 12
    grid = np.array([c for c in product(range(steps + 1), repeat=4) if sum(c) == steps], float) / steps
    body = grid @ s.vertices
    x = random_unit(rng, 200, 3)
    np.testing.assert_allclose(support(s, x), (x @ body.T).max(axis=1), atol=1e-9)


def test_voronoi_index_achieves_support(rng):
    s = EuclideanSimplex(random_unit(rng, 5, 4))
    x = random_unit(rng, 10**4, 4)
    idx = voronoi_assign(s, x)
    assert np.max(np.abs(np.sum(x * s.vertices[idx], axis=1) - support(s, x))) < 1e-12
    for i in range(5):
        assert voronoi_assign(s, s.vertices[i]) == i


def test_circumcenter_of_coordinate_face():
    v = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0], -np.ones(3) / np.sqrt(3)])
    c = circumcenters(EuclideanSimplex(v))
    np.testing.assert_allclose(c[3], np.ones(3) / np.sqrt(3), atol=1e-12)


def test_circumcenters_lie_on_cell_boundaries(rng):
    s = EuclideanSimplex(random_unit(rng, 4, 3))
    c = circumcenters(s)
    for i in range(4):
        vals = np.delete(s.vertices, i, axis=0) @ c[i]
        assert np.ptp(vals) < 1e-9


@pytest.mark.parametrize("eps", [1e-3, 1e-2, 0.1])
def test_regularity_first_order_bound(eps):
    s = regular_simplex(4)
    v = np.array(s.vertices)
    t = v[1] - (v[1] @ v[0]) * v[0]
    t /= np.linalg.norm(t)
    v[0] = np.cos(eps) * v[0] + np.sin(eps) * t
    dist = regularity_distance(EuclideanSimplex(v))
    assert 0 < dist <= 4 * eps


def test_spherical_simplex_examples(rng):
    g = random_unit(rng, 3, 3)
    g[:, 0] = np.abs(g[:, 0]) + 0.2
    ss = SphericalSimplex(g)
    assert not ss.contains(-ss.generators[0])
    m = ss.generators.mean(axis=0)
    assert ss.contains(m / np.linalg.norm(m))
