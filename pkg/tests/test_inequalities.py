import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from simplexwidth.errors import AntipodalPoints, GridMismatch, InputError, NonPositiveWeight
from simplexwidth.inequalities import (
    EightTuple,
    SphereFunction,
    SphereGrid,
    antidote_batch,
    decomposition,
    geodesic_angle,
    geodesic_combine,
    load_sphere_function,
    pair_weight,
    pl_constant,
    random_smooth_function,
    reversed_simpson_antidote,
    save_sphere_function,
    simpson_antidote,
    sinc,
    spl_verify,
    sup_convolution,
)

reals = st.floats(-100, 100, allow_nan=False)
pos = st.floats(1e-3, 100, allow_nan=False)


@given(reals, reals, reals, reals, pos, pos, pos, pos)
def test_decomposition_identity(a1, a2, b1, b2, al1, al2, be1, be2):
    lhs, rhs, scale = decomposition(a1, a2, b1, b2, al1, al2, be1, be2)
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_decomposition_identity_exact():
    vals = [Fraction(x) for x in (3, -2, 5, 7, 2, 9, 4, 11)]
    lhs, rhs, _ = decomposition(*vals)
    assert lhs == rhs


@given(reals, reals, reals, reals, pos, pos, pos, pos)
def test_lemma_is_sound(a1, a2, b1, b2, al1, al2, be1, be2):
    for rev in (False, True):
        hyp, concl, _ = antidote_batch(a1, a2, b1, b2, al1, al2, be1, be2, reversed_=rev)
        if hyp:
            assert concl


def _satisfying(rng, m, reversed_=False):
    al = rng.uniform(0.1, 5, (2, m))
    r1 = rng.normal(size=m)
    r2 = r1 - rng.exponential(size=m) if reversed_ else r1 + rng.exponential(size=m)
    a = np.stack([r1 * al[0], r2 * al[1]])
    ratio = al[1] / al[0]
    be1 = rng.uniform(0.1, 5, m)
    be2 = be1 * ratio * (rng.uniform(0.2, 1.0, m) if reversed_ else rng.uniform(1.0, 5.0, m))
    be = np.stack([be1, be2])
    b = np.stack([(r1 + rng.exponential(size=m)) * be[0], (r2 + rng.exponential(size=m)) * be[1]])
    return a[0], a[1], b[0], b[1], al[0], al[1], be[0], be[1]


@pytest.mark.parametrize("rev", [False, True])
def test_constructed_hypotheses_hold_and_conclude(rng, rev):
    args = _satisfying(rng, 100_000, reversed_=rev)
    hyp, concl, res = antidote_batch(*args, reversed_=rev)
    assert hyp.all()
    assert concl.all()
    assert res.max() < 1e-12


def test_simpson_paradox_needs_the_hypothesis():
    # each strip favours b, the pooled ratio favours a
    t = EightTuple(a=(1, 1), b=(1, 2), alpha=(1, 2), beta=(1, 4))
    for r in (simpson_antidote(t), reversed_simpson_antidote(t)):
        assert not r.hypothesis_holds
        assert not r.conclusion_holds


def test_equality_case_is_decided_exactly():
    t = EightTuple(a=(0.1, 0.2), b=(0.1, 0.2), alpha=(0.3, 0.3), beta=(0.3, 0.3))
    r = simpson_antidote(t)
    assert r.hypothesis_holds and r.conclusion_holds


def test_non_positive_weights():
    with pytest.raises(NonPositiveWeight):
        EightTuple(a=(1, 1), b=(1, 1), alpha=(0, 1), beta=(1, 1))
    with pytest.raises(NonPositiveWeight):
        antidote_batch(1, 1, 1, 1, 1, 1, -1, 1)


def test_sinc_and_pl_constant():
    assert sinc(0.0) == 1.0
    assert sinc(math.pi / 2) == pytest.approx(2 / math.pi)
    for th in (0.0, 0.5, 2.0, 3.0):
        ratio = sinc(th) / sinc(th / 2)
        assert pl_constant(th, 3) == pytest.approx(float(ratio))
    with pytest.raises(AntipodalPoints):
        pl_constant(math.pi, 3)
    with pytest.raises(ValueError):
        pl_constant(0.1, 2)


def test_geodesic_combine_endpoints_and_midpoint(rng):
    q1, q3 = (v / np.linalg.norm(v) for v in rng.normal(size=(2, 4)))
    np.testing.assert_allclose(geodesic_combine(q1, q3, 1.0), q1, atol=1e-12)
    np.testing.assert_allclose(geodesic_combine(q1, q3, 0.0), q3, atol=1e-12)
    mid = geodesic_combine(q1, q3, 0.5)
    assert float(geodesic_angle(mid, q1)) == pytest.approx(float(geodesic_angle(mid, q3)))
    np.testing.assert_allclose(geodesic_combine(q1, q1, 0.3), q1, atol=1e-15)


@given(st.floats(0.01, 0.99), st.floats(0.05, 3.0))
def test_geodesic_combine_splits_the_arc(lam, theta):
    q1 = np.array([1.0, 0.0, 0.0])
    q3 = np.array([math.cos(theta), math.sin(theta), 0.0])
    q2 = geodesic_combine(q1, q3, lam)
    # Q2 sits a fraction (1 - lam) of the way from Q1
    assert float(geodesic_angle(q1, q2)) == pytest.approx((1 - lam) * theta, rel=1e-9, abs=1e-12)


def test_geodesic_combine_antipodal():
    with pytest.raises(AntipodalPoints):
        geodesic_combine([1.0, 0, 0], [-1.0, 0, 0], 0.5)


def test_pair_weight():
    assert np.all(pair_weight(np.linspace(0, 3, 7), 0.5, 3) == 1.0)
    th = 1.2
    expected = sinc(th) / (sinc(th / 2) ** 0.5 * sinc(th / 2) ** 0.5)
    assert pair_weight(th, 0.5, 4) == pytest.approx(float(expected))


def test_grids():
    c = SphereGrid("circle", 16)
    s = SphereGrid("sphere", 16)
    assert (c.dim, s.dim) == (3, 4)
    assert len(c) == 16 and len(s) == 128
    assert c.weights().sum() == pytest.approx(1.0)
    assert s.weights().sum() == pytest.approx(1.0)
    np.testing.assert_allclose(np.linalg.norm(s.nodes(), axis=1), 1.0)
    # z^2 averages to 1/3 on S^2
    fine = SphereGrid("sphere", 64)
    assert fine.weights() @ fine.nodes()[:, 2] ** 2 == pytest.approx(1 / 3, rel=1e-3)
    for bad in (("circle", 12), ("circle", 2), ("torus", 16)):
        with pytest.raises(ValueError):
            SphereGrid(*bad)


def _brute_envelope(f, g, lam):
    n = len(f)
    h = np.zeros(n)
    for i in range(n):
        for j in range(n):
            delta = (j - i + n // 2) % n - n // 2
            if abs(delta) == n // 2:
                continue
            k = (i + math.floor((1 - lam) * delta + 0.5)) % n
            h[k] = max(h[k], f[i] ** (1 - lam) * g[j] ** lam)
    return h


@pytest.mark.parametrize("lam", [0.5, 0.25])
def test_circle_envelope_against_brute_force(rng, lam):
    grid = SphereGrid("circle", 32)
    f = random_smooth_function(grid, rng)
    g = random_smooth_function(grid, rng)
    np.testing.assert_allclose(sup_convolution(f, g, lam), _brute_envelope(f.values, g.values, lam), rtol=1e-14)


def test_constant_functions_give_equality():
    grid = SphereGrid("circle", 64)
    one = SphereFunction(grid, np.ones(64))
    r = spl_verify(one, one)
    assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(1.0) and r.holds


def test_spl_holds_on_random_pairs(rng):
    grid = SphereGrid("circle", 256)
    for _ in range(10):
        r = spl_verify(random_smooth_function(grid, rng), random_smooth_function(grid, rng), 0.5)
        assert r.holds


def test_spl_on_the_two_sphere(rng):
    grid = SphereGrid("sphere", 16)
    r = spl_verify(random_smooth_function(grid, rng), random_smooth_function(grid, rng), 0.5)
    assert r.holds and r.lhs > 0


def test_spl_zero_integral_is_trivial():
    grid = SphereGrid("circle", 16)
    r = spl_verify(SphereFunction(grid, np.zeros(16)), SphereFunction(grid, np.ones(16)))
    assert r.holds and r.rhs == 0.0


def test_spl_rejects_bad_lambda_and_grids(rng):
    a = SphereFunction(SphereGrid("circle", 16), np.ones(16))
    b = SphereFunction(SphereGrid("circle", 32), np.ones(32))
    with pytest.raises(ValueError):
        spl_verify(a, a, lam=1.0)
    with pytest.raises(GridMismatch):
        spl_verify(a, b)
    with pytest.raises(GridMismatch):
        SphereFunction(SphereGrid("circle", 16), np.ones(8))


@pytest.mark.parametrize("kind", ["circle", "sphere"])
def test_function_csv_roundtrip(tmp_path, rng, kind):
    fn = random_smooth_function(SphereGrid(kind, 8), rng)
    path = tmp_path / "f.csv"
    save_sphere_function(fn, path)
    back = load_sphere_function(path, kind)
    assert back.grid == fn.grid
    np.testing.assert_array_equal(back.values, fn.values)


def test_function_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("angle,value\n0.0,1\n0.5,1\n1.0,1\n1.5,1\n")
    with pytest.raises(GridMismatch):
        load_sphere_function(p)
    p.write_text("")
    with pytest.raises(InputError):
        load_sphere_function(p)
    p.write_text("1,2,3,4\n")
    with pytest.raises(InputError):
        load_sphere_function(p)
