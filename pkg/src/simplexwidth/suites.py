"""Randomized property suites behind ``simplexwidth verify``.

Each suite returns a :class:`SuiteReport`; a suite passes when every check
has zero violations.  All randomness is drawn from generators keyed by the
suite seed, so a report is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .ascent import verify_switch_point, verify_switch_region
from .inequalities import SphereGrid, antidote_batch, random_smooth_function, spl_verify
from .shear import ShearMap, finite_difference_jacobian
from .simplex import EuclideanSimplex, SphericalSimplex
from .sphere import covers_sphere, project, rng_for, sample_uniform
from .strips import cap, centroid, joint_moments

SUITES = ("shear", "lemma", "spl", "switch")


@dataclass
class CheckResult:
    name: str
    trials: int
    violations: int
    worst: float
    tolerance: float
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(c.violations for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "violations": self.violations,
            "checks": [asdict(c) | {"ok": c.ok} for c in self.checks],
        }


def _max_check(name, errors, tol, payload) -> CheckResult:
    errors = np.asarray(errors, dtype=float)
    bad = np.flatnonzero(~(errors < tol))
    ce = None
    if len(bad):
        ce = {k: np.asarray(v)[bad[0]].tolist() for k, v in payload.items()}
        ce["error"] = float(errors[bad[0]])
    return CheckResult(name, int(errors.size), int(len(bad)), float(np.max(errors)), tol, ce)


def _random_covering(d: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        v = project(rng.standard_normal((d + 1, d)))
        if covers_sphere(v):
            return v


# --- shear -------------------------------------------------------------------


def shear_suite(seed: int = 0, d: int = 4, trials: int = 10**4, n_mc: int = 10**6) -> SuiteReport:
    rep = SuiteReport("shear", seed)
    rng = rng_for(seed, 1)
    x = sample_uniform(d, trials, seed)
    s = rng.uniform(-2, 2, trials)
    t = rng.uniform(-2, 2, trials)

    # Vectorized shear: one parameter per row.
    def shear_rows(par, pts):
        y = pts.copy()
        y[:, 1] += par * y[:, 0]
        return y / np.linalg.norm(y, axis=1, keepdims=True)

    err = np.linalg.norm(shear_rows(s + t, x) - shear_rows(s, shear_rows(t, x)), axis=1)
    rep.checks.append(_max_check("group_law", err, 1e-12, {"x": x, "s": s, "t": t}))
    err = np.linalg.norm(shear_rows(-s, shear_rows(s, x)) - x, axis=1)
    rep.checks.append(_max_check("inverse", err, 1e-12, {"x": x, "s": s}))

    # Pole transport: x orthogonal to a random pole P.
    poles = sample_uniform(d, trials, seed + 1)
    xs = x - np.sum(x * poles, axis=1)[:, None] * poles
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    new_poles = np.array([ShearMap(float(si), d).map_pole(p) for si, p in zip(s, poles)])
    err = np.abs(np.sum(shear_rows(s, xs) * new_poles, axis=1))
    rep.checks.append(_max_check("pole_transport", err, 1e-12, {"x": xs, "pole": poles, "s": s}))

    # Great spheres map to great spheres: 100 points per sphere are coplanar.
    n_spheres = max(1, trials // 100)
    sv = np.empty(n_spheres)
    for k in range(n_spheres):
        p = poles[k]
        pts = sample_uniform(d, 100, seed + 7 + k)
        pts = project(pts - np.outer(pts @ p, p))
        sv[k] = np.linalg.svd(shear_rows(np.full(100, s[k]), pts), compute_uv=False)[-1]
    rep.checks.append(_max_check("great_sphere", sv, 1e-10, {"pole": poles[:n_spheres], "s": s[:n_spheres]}))

    # Jacobian against central differences on a subset.
    m = min(10**3, trials)
    rel = np.array(
        [
            abs(finite_difference_jacobian(ShearMap(float(s[i]), d), x[i]) / ShearMap(float(s[i]), d).jacobian(x[i]) - 1)
            for i in range(m)
        ]
    )
    rep.checks.append(_max_check("jacobian_finite_difference", rel, 1e-5, {"x": x[:m], "s": s[:m]}))

    fwd = np.array([ShearMap(float(si), d).jacobian(xi) for si, xi in zip(s, x)])
    back = np.array([ShearMap(-float(si), d).jacobian(yi) for si, yi in zip(s, shear_rows(s, x))])
    rep.checks.append(_max_check("jacobian_chain_rule", np.abs(fwd * back - 1), 1e-10, {"x": x, "s": s}))

    # Mass and change of variables, 3 sigma, for a few shear values.
    mass_err, cov_err = [], []
    s_grid = np.array([0.5, 1.0, 2.0])
    for k, sv_ in enumerate(s_grid):
        sh = ShearMap(float(sv_), d)

        def contrib(pts, sh=sh):
            dens = sh.pushforward_density(pts)
            return np.column_stack([dens, sh.apply(pts)[:, 0] ** 2, pts[:, 0] ** 2 * dens])

        mom = joint_moments(contrib, d, n_mc, seed + 100 + k)
        se_mass = math.sqrt(mom.cov[0, 0] / n_mc)
        mass_err.append(abs(mom.mean[0] - 1.0) / se_mass)
        g = np.array([0.0, 1.0, -1.0])
        cov_err.append(abs(mom.mean[1] - mom.mean[2]) / mom.linear_se(g))
    rep.checks.append(_max_check("pushforward_mass_sigmas", mass_err, 3.0, {"s": s_grid}))
    rep.checks.append(_max_check("change_of_variables_sigmas", cov_err, 3.0, {"s": s_grid}))

    # Spherical simplexes map to spherical simplexes, pointwise.
    flips = np.zeros(n_spheres)
    for k in range(n_spheres):
        gens = project(rng.standard_normal((d, d)))
        ss = SphericalSimplex(gens)
        sh = ShearMap(float(s[k]), d)
        img = SphericalSimplex(sh.apply(gens))
        pts = sample_uniform(d, 100, seed + 5000 + k)
        c_src = ss.cone_coordinates(pts)
        margin = np.min(np.abs(c_src), axis=1) > 1e-9
        flips[k] = np.sum(ss.contains(pts[margin]) != img.contains(sh.apply(pts[margin])))
    rep.checks.append(_max_check("simplex_to_simplex", flips, 0.5, {"s": s[:n_spheres]}))
    return rep


# --- lemma ----------------------------------------------------------------------


def lemma_suite(seed: int = 0, trials: int = 10**6, tuple_values=None) -> SuiteReport:
    """Residual and soundness checks for the aggregation lemma and its reversed form.

    ``tuple_values`` (eight numbers ``a1 a2 b1 b2 alpha1 alpha2 beta1 beta2``)
    injects one extra tuple; nonpositive weights raise ``NonPositiveWeight``.
    """
    rep = SuiteReport("lemma", seed)
    rng = rng_for(seed, 2)
    a = rng.normal(size=(2, trials))
    b = rng.normal(size=(2, trials))
    al = rng.exponential(size=(2, trials))
    be = rng.exponential(size=(2, trials))
    cols = [a[0], a[1], b[0], b[1], al[0], al[1], be[0], be[1]]
    if tuple_values is not None:
        cols = [np.append(c, float(v)) for c, v in zip(cols, tuple_values)]
    # Half of the tuples are built to satisfy the hypothesis (the rest mostly do not).
    half = trials // 2
    for reversed_ in (False, True):
        sign = -1.0 if reversed_ else 1.0
        c = [np.array(col) for col in cols]
        al1, al2, be1 = c[4][:half], c[5][:half], c[6][:half]
        be2 = be1 * (al2 / al1) * np.exp(sign * np.abs(rng.normal(size=half)))
        ra1 = rng.normal(size=half)
        ra2 = ra1 + sign * np.abs(rng.normal(size=half))
        c[0][:half] = ra1 * al1
        c[1][:half] = ra2 * al2
        c[2][:half] = (ra1 + np.abs(rng.normal(size=half))) * be1
        c[3][:half] = (ra2 + np.abs(rng.normal(size=half))) * be2
        c[7][:half] = be2
        hyp, concl, res = antidote_batch(*c, reversed_=reversed_)
        tag = "reversed_" if reversed_ else ""
        payload = {f"t{i}": c[i] for i in range(8)}
        rep.checks.append(_max_check(f"{tag}identity_residual", res, 1e-12, payload))
        bad = (hyp & ~concl).astype(float)
        rep.checks.append(_max_check(f"{tag}soundness", bad, 0.5, payload))
    return rep


# --- Prekopa-Leindler -------------------------------------------------------


def spl_suite(seed: int = 0, trials: int = 100, resolution: int = 2048, lam: float = 0.5, slack: float = 1e-2) -> SuiteReport:
    rep = SuiteReport("spl", seed)
    grid = SphereGrid("circle", resolution)
    rng = rng_for(seed, 3)
    margins = []
    for _ in range(trials):
        f = random_smooth_function(grid, rng)
        g = random_smooth_function(grid, rng)
        r = spl_verify(f, g, lam, slack)
        # Shortfall relative to the slacked bound: must stay below 0.
        margins.append(r.rhs * (1 - slack) - r.lhs)
    rep.checks.append(_max_check("circle_pl_shortfall", margins, 0.0, {"trial": np.arange(trials)}))
    return rep


# --- switching inequalities ------------------------------------------------------


def switch_suite(seed: int = 0, d: int = 3, trials: int = 10**3, n: int = 10**4) -> SuiteReport:
    rep = SuiteReport("switch", seed)
    rng = rng_for(seed, 4)
    simplex = EuclideanSimplex(_random_covering(d, rng))
    voronoi = verify_switch_region(simplex, lambda x: np.argmax(x @ simplex.vertices.T, axis=1), n, seed)
    rep.checks.append(
        _max_check("voronoi_equality", [abs(voronoi.lhs - voronoi.rhs)], 1e-300, {"lhs": [voronoi.lhs]})
    )
    gaps = np.empty(trials)
    for k in range(trials):
        kind = k % 3
        if kind == 0:
            labeller = rng_for(seed, 40, k)

            def part(x, r=labeller):
                return r.integers(0, d + 1, size=len(x))
        elif kind == 1:
            perm = rng.permutation(d + 1)

            def part(x, p=perm):
                return p[np.argmax(x @ simplex.vertices.T, axis=1)]
        else:
            other = _random_covering(d, rng)

            def part(x, o=other):
                return np.argmax(x @ o.T, axis=1)
        res = verify_switch_region(simplex, part, n, seed + k)
        gaps[k] = res.lhs - res.rhs
    rep.checks.append(_max_check("region_switch", gaps, 1e-12, {"trial": np.arange(trials)}))

    pgaps = np.empty(trials)
    eq = np.empty(trials // 10)
    for k in range(trials):
        u = project(rng.standard_normal(d))
        region = cap(u, float(rng.uniform(-0.5, 0.9)))
        x_pt = project(rng.standard_normal(d))
        res = verify_switch_point(region, x_pt, n, seed + k)
        pgaps[k] = res.lhs - res.rhs
        if k < len(eq):
            g = centroid(region, n, seed + k).direction
            r2 = verify_switch_point(region, g, n, seed + k)
            eq[k] = abs(r2.lhs - r2.rhs)
    rep.checks.append(_max_check("point_switch", pgaps, 1e-12, {"trial": np.arange(trials)}))
    rep.checks.append(_max_check("centroid_equality", eq, 1e-12, {"trial": np.arange(len(eq))}))
    return rep


def run_suite(name: str, seed: int = 0, **kwargs) -> SuiteReport:
    fn = {"shear": shear_suite, "lemma": lemma_suite, "spl": spl_suite, "switch": switch_suite}.get(name)
    if fn is None:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
    return fn(seed=seed, **kwargs)
