"""Spherical centroids, slope strips, and the strip/centroid experiments.

A :class:`Region` is an indicator predicate on the sphere; every integral
over a region is a rejection-sampling average over the uniform stream, so an
estimate with ``n`` samples is ``(1/n) * sum(g(x) * 1_R(x))``.

Strips are taken by the slope ``t = x_2 / x_1`` on the open hemisphere
``x_1 > 0``; a strip over ``[t_lo, t_hi)`` keeps the points whose slope
falls in that half-open interval.  Samples with ``x_1 <= 1e-12`` are
discarded (a null set).

The two experiments compare shear-transported strips and track the slope of
the centroid of a sheared simplex.  They *measure*; a record carries a
verdict (``consistent``, ``violated`` or ``inconclusive`` at 3 standard
errors) and nothing in the package treats either monotonicity statement as
an invariant.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyRegion, PreconditionError, UndefinedCentroid
from .shear import ShearMap
from .simplex import EuclideanSimplex, SphericalSimplex
from .sphere import MonteCarloEstimate, project, uniform_chunks

X1_FLOOR = 1e-12
RESULTANT_FLOOR = 1e-6
VERDICT_SIGMAS = 3.0


@dataclass(frozen=True)
class Region:
    membership: Callable[[np.ndarray], np.ndarray]
    label: str
    dim: int
    hemisphere_safe: bool = False

    def contains(self, x) -> np.ndarray:
        return np.asarray(self.membership(np.atleast_2d(x)), dtype=bool)


@dataclass(frozen=True)
class StripInterval:
    t_lo: float
    t_hi: float

    def __post_init__(self):
        if not self.t_lo < self.t_hi:
            raise ValueError(f"empty strip interval [{self.t_lo}, {self.t_hi})")

    def shifted(self, s: float) -> "StripInterval":
        return StripInterval(self.t_lo + s, self.t_hi + s)

    def mask(self, x: np.ndarray) -> np.ndarray:
        x1 = x[:, 0]
        ok = x1 > X1_FLOOR
        t = np.where(ok, x[:, 1] / np.where(ok, x1, 1.0), np.nan)
        return ok & (t >= self.t_lo) & (t < self.t_hi)


# --- region constructors ---------------------------------------------------


def hemisphere(d: int, axis: int = 0) -> Region:
    return Region(lambda x: x[:, axis] >= 0.0, f"hemisphere[x{axis + 1}>=0]", d, axis == 0)


def cap(center, height: float) -> Region:
    u = project(center)
    safe = bool(u[0] > 0 and u[0] >= math.sqrt(max(0.0, 1.0 - height**2)) and height >= 0)
    return Region(lambda x: x @ u >= height, f"cap[h={height}]", len(u), safe)


def simplex_region(ss: SphericalSimplex, label: str = "spherical-simplex") -> Region:
    safe = bool(np.all(ss.generators[:, 0] >= 0.0))
    return Region(ss.contains, label, ss.dim, safe)


def voronoi_cell(simplex: EuclideanSimplex, i: int) -> Region:
    v = simplex.vertices
    return Region(lambda x: np.argmax(x @ v.T, axis=1) == i, f"voronoi[{i}]", simplex.dim)


def sheared(region: Region, shear: ShearMap) -> Region:
    """The image ``f_s(R)``: ``y`` belongs iff ``f_{-s}(y)`` belongs to ``R``."""
    if shear.s == 0.0:
        return region
    back = shear.inverse()
    return Region(
        lambda y: region.membership(back.apply(y)),
        f"f_{shear.s:g}({region.label})",
        region.dim,
        region.hemisphere_safe,
    )


def strip(region: Region, interval: StripInterval) -> Region:
    return Region(
        lambda x: interval.mask(x) & region.membership(x),
        f"{region.label}_[{interval.t_lo:g},{interval.t_hi:g})",
        region.dim,
        True,
    )


def union(a: Region, b: Region) -> Region:
    return Region(
        lambda x: a.membership(x) | b.membership(x),
        f"({a.label})|({b.label})",
        a.dim,
        a.hemisphere_safe and b.hemisphere_safe,
    )


# --- shared-stream moments ---------------------------------------------------


def _check_hemisphere(region: Region, x: np.ndarray, mask: np.ndarray):
    if region.hemisphere_safe and np.any(x[mask, 0] < -X1_FLOOR):
        raise PreconditionError(f"region {region.label} is flagged hemisphere-safe but is not")


@dataclass
class JointMoments:
    """Means and covariance of a vector of per-sample contributions."""

    mean: np.ndarray
    cov: np.ndarray
    n: int
    seed: int

    def estimate(self, i: int) -> MonteCarloEstimate:
        return MonteCarloEstimate(
            float(self.mean[i]), math.sqrt(max(self.cov[i, i], 0.0) / self.n), self.n, self.seed
        )

    def linear_se(self, grad: np.ndarray) -> float:
        """Delta-method standard error of a function with gradient ``grad`` at the mean."""
        return math.sqrt(max(float(grad @ self.cov @ grad), 0.0) / self.n)


def joint_moments(
    contributions: Callable[[np.ndarray], np.ndarray],
    d: int,
    n: int,
    seed: int,
    sampler: str = "gaussian",
) -> JointMoments:
    """Average a vector-valued per-sample contribution over the uniform stream.

    ``contributions(x)`` maps an ``(m, d)`` chunk to an ``(m, k)`` array.
    """
    sums = []
    cross = []
    for x in uniform_chunks(d, n, seed, sampler):
        c = np.asarray(contributions(x), dtype=float)
        sums.append(c.sum(axis=0))
        cross.append(c.T @ c)
    k = len(sums[0])
    s = np.array([math.fsum(p[i] for p in sums) for i in range(k)])
    q = np.sum(cross, axis=0)
    mean = s / n
    cov = (q - n * np.outer(mean, mean)) / max(n - 1, 1)
    return JointMoments(mean, cov, n, seed)


# --- centroids -------------------------------------------------------------


@dataclass(frozen=True)
class CentroidEstimate:
    direction: np.ndarray
    resultant: np.ndarray
    resultant_norm: float
    measure: MonteCarloEstimate
    angular_std_error: float
    n_accepted: int


def region_resultant(region: Region, n: int, seed: int, sampler: str = "gaussian"):
    """``(sum of accepted points, sum of their outer products, count)`` over ``n`` draws."""
    d = region.dim
    sums, outers, count = [], [], 0
    for x in uniform_chunks(d, n, seed, sampler):
        m = region.contains(x)
        _check_hemisphere(region, x, m)
        acc = x[m]
        count += len(acc)
        sums.append(acc.sum(axis=0))
        outers.append(acc.T @ acc)
    total = np.array([math.fsum(s[j] for s in sums) for j in range(d)])
    return total, np.sum(outers, axis=0), count


def centroid(region: Region, n: int = 10**6, seed: int = 0, sampler: str = "gaussian") -> CentroidEstimate:
    """Spherical centroid ``project(integral of x over R)`` of a region."""
    total, outer, count = region_resultant(region, n, seed, sampler)
    if count == 0:
        raise EmptyRegion(f"no samples landed in {region.label}")
    r = total / n
    norm = float(np.linalg.norm(r))
    if norm < RESULTANT_FLOOR:
        raise UndefinedCentroid(f"resultant of {region.label} has norm {norm:.3g}")
    g = r / norm
    cov = (outer / n - np.outer(r, r)) / max(n - 1, 1)
    perp = np.eye(region.dim) - np.outer(g, g)
    ang = math.sqrt(max(np.trace(perp @ cov @ perp), 0.0)) / norm
    p = count / n
    measure = MonteCarloEstimate(p, math.sqrt(p * (1 - p) / n), n, seed)
    return CentroidEstimate(g, r, norm, measure, ang, count)


# --- strips --------------------------------------------------------------------


def _require_safe(region: Region):
    if not region.hemisphere_safe:
        raise PreconditionError(f"region {region.label} must lie in the hemisphere x1 >= 0")


def strip_integral(
    region: Region,
    interval: StripInterval,
    coordinate: int,
    n: int = 10**6,
    seed: int = 0,
    sampler: str = "gaussian",
) -> MonteCarloEstimate:
    """Estimate the integral of ``x_coordinate`` (1-based) over the strip ``R_I``."""
    _require_safe(region)
    if coordinate not in (1, 2):
        raise ValueError("coordinate must be 1 or 2")
    j = coordinate - 1
    tot, tot_sq, count = [], [], 0
    for x in uniform_chunks(region.dim, n, seed, sampler):
        m = interval.mask(x) & region.contains(x)
        _check_hemisphere(region, x, m)
        vals = x[m, j]
        count += len(vals)
        tot.append(vals.sum())
        tot_sq.append(vals @ vals)
    if count == 0:
        raise EmptyRegion(f"no samples in the strip [{interval.t_lo}, {interval.t_hi}) of {region.label}")
    return MonteCarloEstimate.from_sums(math.fsum(tot), math.fsum(tot_sq), n, seed)


def _ratio_and_grad(mom: JointMoments, num: int, den: int):
    a, b = mom.mean[num], mom.mean[den]
    grad = np.zeros(len(mom.mean))
    grad[num] = 1.0 / b
    grad[den] = -a / b**2
    return a / b, grad


def _verdict(diff: float, se: float) -> str:
    if diff > VERDICT_SIGMAS * se:
        return "consistent"
    if diff < -VERDICT_SIGMAS * se:
        return "violated"
    return "inconclusive"


@dataclass
class StripRatioRecord:
    s: float
    t1: float
    t2: float
    dim: int
    integrals: dict
    ratios: dict
    std_errors: dict
    difference: float
    difference_se: float
    verdict: str
    n: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def _open_hemisphere(ss: SphericalSimplex):
    if not np.all(ss.generators[:, 0] > 0.0):
        raise PreconditionError("the spherical simplex must lie in the open hemisphere x1 > 0")


def strip_ratio_experiment(
    ss: SphericalSimplex,
    s: float,
    t1: float,
    t2: float,
    n: int = 10**6,
    seed: int = 0,
    test_mode: bool = False,
    sampler: str = "gaussian",
) -> StripRatioRecord:
    """Compare the T/S mass ratio of the strip ``[t1-s, t2-s)`` with that of ``[t1, t2)``.

    ``T = f_s(S)``.  The four ``x_1``-integrals share one sample stream; the
    ratio standard errors and the standard error of their difference come
    from the delta method on the joint per-sample covariance.
    """
    if not (0.0 < t2 - t1 < s) and not (test_mode and t2 > t1):
        raise PreconditionError(f"need 0 < t2 - t1 < s, got t1={t1}, t2={t2}, s={s}")
    _open_hemisphere(ss)
    d = ss.dim
    source = simplex_region(ss, "S")
    image = sheared(source, ShearMap(s, d))
    lower = StripInterval(t1 - s, t2 - s)
    upper = StripInterval(t1, t2)
    cells = [(image, lower), (source, lower), (image, upper), (source, upper)]

    def contributions(x):
        out = np.empty((len(x), 4))
        for k, (reg, iv) in enumerate(cells):
            out[:, k] = np.where(iv.mask(x) & reg.contains(x), x[:, 0], 0.0)
        return out

    mom = joint_moments(contributions, d, n, seed, sampler)
    if np.any(mom.mean[[1, 3]] == 0.0) or np.any(mom.mean[[0, 2]] == 0.0):
        raise EmptyRegion("a strip received no samples")
    r_low, g_low = _ratio_and_grad(mom, 0, 1)
    r_up, g_up = _ratio_and_grad(mom, 2, 3)
    diff = r_up - r_low
    diff_se = mom.linear_se(g_up - g_low)
    names = ["T_lower", "S_lower", "T_upper", "S_upper"]
    return StripRatioRecord(
        s=float(s),
        t1=float(t1),
        t2=float(t2),
        dim=d,
        integrals={nm: float(mom.mean[i]) for i, nm in enumerate(names)},
        ratios={"lower": r_low, "upper": r_up},
        std_errors={
            **{nm: math.sqrt(max(mom.cov[i, i], 0.0) / n) for i, nm in enumerate(names)},
            "ratio_lower": mom.linear_se(g_low),
            "ratio_upper": mom.linear_se(g_up),
        },
        difference=diff,
        difference_se=diff_se,
        verdict=_verdict(diff, diff_se),
        n=n,
        seed=seed,
    )


@dataclass
class CentroidSlopeRecord:
    s_values: list
    slopes: list
    slope_std_errors: list
    differences: list
    difference_std_errors: list
    verdict: str
    dim: int
    n: int
    seed: int
    centroids: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def centroid_uniqueness_experiment(
    ss: SphericalSimplex,
    s_values: Sequence[float],
    n: int = 10**6,
    seed: int = 0,
    sampler: str = "gaussian",
) -> CentroidSlopeRecord:
    """Track ``G(f_s(S)) . e_2 / G(f_s(S)) . e_1`` over a sequence of shears.

    All shears are evaluated on the same sample stream (common random
    numbers), so equal ``s`` give identical slopes and the differences
    between consecutive slopes have small, correctly correlated errors.
    """
    if not np.all(ss.generators[:, 0] >= 0.0):
        raise PreconditionError("the spherical simplex must lie in the hemisphere x1 >= 0")
    d = ss.dim
    source = simplex_region(ss, "S")
    regions = [sheared(source, ShearMap(float(s), d)) for s in s_values]
    m = len(regions)

    def contributions(x):
        out = np.empty((len(x), 2 * m + d * m))
        for k, reg in enumerate(regions):
            inside = reg.contains(x)
            out[:, 2 * k] = np.where(inside, x[:, 0], 0.0)
            out[:, 2 * k + 1] = np.where(inside, x[:, 1], 0.0)
            out[:, 2 * m + d * k : 2 * m + d * (k + 1)] = x * inside[:, None]
        return out

    mom = joint_moments(contributions, d, n, seed, sampler)
    slopes, ses, grads = [], [], []
    for k in range(m):
        if mom.mean[2 * k] <= 0.0:
            raise EmptyRegion(f"sheared simplex for s={s_values[k]} received no samples")
        r, g = _ratio_and_grad(mom, 2 * k + 1, 2 * k)
        slopes.append(float(r))
        ses.append(mom.linear_se(g))
        grads.append(g)
    diffs = [slopes[k + 1] - slopes[k] for k in range(m - 1)]
    dses = [mom.linear_se(grads[k + 1] - grads[k]) for k in range(m - 1)]
    verdicts = {_verdict(dv, se) for dv, se in zip(diffs, dses)}
    if "violated" in verdicts:
        verdict = "violated"
    elif verdicts <= {"consistent"}:
        verdict = "consistent"
    else:
        verdict = "inconclusive"
    cents = []
    for k in range(m):
        r = mom.mean[2 * m + d * k : 2 * m + d * (k + 1)]
        cents.append((r / np.linalg.norm(r)).tolist())
    return CentroidSlopeRecord(
        s_values=[float(s) for s in s_values],
        slopes=slopes,
        slope_std_errors=ses,
        differences=diffs,
        difference_std_errors=dses,
        verdict=verdict,
        dim=d,
        n=n,
        seed=seed,
        centroids=cents,
    )


# --- documented configurations ------------------------------------------------

#: Triangle on S^2 in the open hemisphere x1 > 0 used by the strip-ratio runs.
DOCUMENTED_TRIANGLE = SphericalSimplex(
    np.array([[1.0, -0.3, -0.4], [1.0, 0.6, -0.3], [1.0, 0.1, 0.5]])
)

#: Triangle on S^2 symmetric under x2 -> -x2.
SYMMETRIC_TRIANGLE = SphericalSimplex(
    np.array([[1.0, 0.0, 0.5], [1.0, 0.5, -0.3], [1.0, -0.5, -0.3]])
)

#: Tetrahedral cell on S^3 with three vertices on {x1 = 0} and one free vertex.
COMMON_VERTEX_SIMPLEX = SphericalSimplex(
    np.array(
        [
            [0.0, 0.3, 1.0, 0.0],
            [0.0, 0.3, -0.5, 0.8660254037844386],
            [0.0, 0.3, -0.5, -0.8660254037844386],
            [1.0, 0.2, 0.1, 0.0],
        ]
    )
)
