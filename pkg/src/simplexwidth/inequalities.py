"""Numerical checks of the aggregation lemma and the spherical Prekopa-Leindler inequality.

Aggregation lemma
-----------------
For reals ``a_i, b_i`` and positive ``alpha_i, beta_i`` (``i = 1, 2``), if
``a_i/alpha_i <= b_i/beta_i`` for both ``i``, ``a_1/alpha_1 <= a_2/alpha_2``
and ``alpha_2/alpha_1 <= beta_2/beta_1``, then the pooled ratios keep their
order: ``(a_1+a_2)/(alpha_1+alpha_2) <= (b_1+b_2)/(beta_1+beta_2)``.  The
difference of the pooled ratios has an exact decomposition (see
:func:`decomposition`) whose terms are all nonnegative under the
hypotheses.  Reversing the middle and right hypotheses also works.

Prekopa-Leindler on S^{d-2}
---------------------------
Functions are tabulated on a uniform circle grid (``d = 3``) or an
equal-angle latitude/longitude grid of S^2 (``d = 4``).  The smallest
admissible ``h`` is built by exhaustive sup-convolution over all node pairs,
snapping the geodesic combination to the nearest node.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels
from .errors import AntipodalPoints, GridMismatch, InputError, NonPositiveWeight

ANTIPODAL_MARGIN = 1e-9
IDENTITY_RTOL = 1e-12


# --- aggregation lemma -------------------------------------------------------


@dataclass(frozen=True)
class EightTuple:
    a: tuple[float, float]
    b: tuple[float, float]
    alpha: tuple[float, float]
    beta: tuple[float, float]

    def __post_init__(self):
        for name in ("a", "b", "alpha", "beta"):
            val = tuple(float(x) for x in getattr(self, name))
            if len(val) != 2:
                raise ValueError(f"{name} must be a pair")
            object.__setattr__(self, name, val)
        if min(self.alpha + self.beta) <= 0.0:
            raise NonPositiveWeight(f"alpha and beta must be positive, got {self.alpha}, {self.beta}")


@dataclass(frozen=True)
class AntidoteResult:
    hypothesis_holds: bool
    conclusion_holds: bool
    identity_residual: float


def decomposition(a1, a2, b1, b2, al1, al2, be1, be2):
    """Both sides of the pooled-ratio identity (works elementwise on arrays).

    Returns ``(lhs, rhs, scale)`` with
    ``lhs = (b1+b2)/(be1+be2) - (a1+a2)/(al1+al2)`` and
    ``rhs = (be1*d1 + be2*d2 + al1*al2/(al1+al2) * d_a * d_ab) / (be1+be2)``,
    and ``scale`` a magnitude used to make the residual relative.
    """
    d1 = b1 / be1 - a1 / al1
    d2 = b2 / be2 - a2 / al2
    d_a = a2 / al2 - a1 / al1
    d_ab = be2 / al2 - be1 / al1
    pooled_b = (b1 + b2) / (be1 + be2)
    pooled_a = (a1 + a2) / (al1 + al2)
    lhs = pooled_b - pooled_a
    t1 = be1 * d1
    t2 = be2 * d2
    t3 = al1 * al2 / (al1 + al2) * d_a * d_ab
    rhs = (t1 + t2 + t3) / (be1 + be2)
    # Magnitude of the largest intermediate on either side; rounding error is relative to it.
    t3_mag = (al1 * be2 + al2 * be1) / (al1 + al2) * (np.abs(a2 / al2) + np.abs(a1 / al1)) / (be1 + be2)
    scale = np.maximum.reduce(
        [
            np.abs(pooled_b),
            np.abs(pooled_a),
            np.abs(b1 / be1) + np.abs(a1 / al1),
            np.abs(b2 / be2) + np.abs(a2 / al2),
            t3_mag,
            np.full(np.shape(lhs), np.finfo(float).tiny),
        ]
    )
    return lhs, rhs, scale


def _hypothesis(a1, a2, b1, b2, al1, al2, be1, be2, reversed_: bool):
    first = (a1 / al1 <= b1 / be1) & (a2 / al2 <= b2 / be2)
    if reversed_:
        return first & (a1 / al1 >= a2 / al2) & (al2 / al1 >= be2 / be1)
    return first & (a1 / al1 <= a2 / al2) & (al2 / al1 <= be2 / be1)


def _exact_conclusion(a1, a2, b1, b2, al1, al2, be1, be2) -> bool:
    f = [Fraction(float(v)) for v in (a1, a2, b1, b2, al1, al2, be1, be2)]
    return (f[0] + f[1]) / (f[4] + f[5]) <= (f[2] + f[3]) / (f[6] + f[7])


def antidote_batch(a1, a2, b1, b2, al1, al2, be1, be2, reversed_: bool = False):
    """Vectorized lemma check.

    Returns boolean arrays ``(hypothesis, conclusion)`` and the relative
    identity residual.  Conclusions within ``1e-12`` relative of equality are
    re-decided in exact rational arithmetic on the float inputs.
    """
    arrs = [np.asarray(v, dtype=float) for v in (a1, a2, b1, b2, al1, al2, be1, be2)]
    if np.any(np.concatenate([np.ravel(x) for x in arrs[4:]]) <= 0.0):
        raise NonPositiveWeight("alpha and beta must be positive")
    lhs, rhs, scale = decomposition(*arrs)
    hyp = _hypothesis(*arrs, reversed_=reversed_)
    concl = np.asarray(lhs >= 0.0)
    close = np.abs(lhs) <= IDENTITY_RTOL * scale
    if np.any(close):
        flat = [np.broadcast_to(x, np.shape(lhs)).ravel() for x in arrs]
        concl = concl.copy().ravel()
        for i in np.flatnonzero(np.ravel(close)):
            concl[i] = _exact_conclusion(*(x[i] for x in flat))
        concl = concl.reshape(np.shape(lhs))
    residual = np.abs(lhs - rhs) / scale
    return hyp, concl, residual


def _single(t: EightTuple, reversed_: bool) -> AntidoteResult:
    hyp, concl, res = antidote_batch(*t.a, *t.b, *t.alpha, *t.beta, reversed_=reversed_)
    return AntidoteResult(bool(hyp), bool(concl), float(res))


def simpson_antidote(t: EightTuple) -> AntidoteResult:
    return _single(t, reversed_=False)


def reversed_simpson_antidote(t: EightTuple) -> AntidoteResult:
    return _single(t, reversed_=True)


# --- geodesic helpers ------------------------------------------------------


def sinc(theta):
    """``sin(theta) / theta`` with ``sinc(0) = 1``."""
    return np.sinc(np.asarray(theta, dtype=float) / np.pi)


def pl_constant(theta: float, d: int) -> float:
    """``C = sinc(theta) / sinc(theta / 2) = cos(theta / 2)``; raise to ``d - 3`` as needed."""
    if d < 3:
        raise ValueError("dimension must be at least 3")
    if theta < 0.0:
        raise ValueError("theta must be nonnegative")
    if theta >= math.pi - ANTIPODAL_MARGIN:
        raise AntipodalPoints(f"theta = {theta} is antipodal")
    return math.cos(theta / 2.0)


def geodesic_angle(q1, q3) -> np.ndarray:
    q1 = np.asarray(q1, dtype=float)
    q3 = np.asarray(q3, dtype=float)
    return 2.0 * np.arctan2(np.linalg.norm(q1 - q3, axis=-1), np.linalg.norm(q1 + q3, axis=-1))


def geodesic_combine(q1, q3, lam: float) -> np.ndarray:
    """``project(Q1 sin(lam theta) + Q3 sin((1 - lam) theta))``.

    With this weighting ``lam = 1`` returns ``Q1``, ``lam = 0`` returns
    ``Q3`` and ``lam = 1/2`` gives the geodesic midpoint.  The weights are
    divided by ``theta`` (sinc form) so coincident points are handled.
    """
    q1 = np.asarray(q1, dtype=float)
    q3 = np.asarray(q3, dtype=float)
    theta = geodesic_angle(q1, q3)
    if np.any(theta >= math.pi - ANTIPODAL_MARGIN):
        raise AntipodalPoints("geodesic combination of antipodal points is undefined")
    w1 = lam * sinc(lam * theta)
    w3 = (1.0 - lam) * sinc((1.0 - lam) * theta)
    y = np.asarray(w1)[..., None] * q1 + np.asarray(w3)[..., None] * q3
    return y / np.linalg.norm(y, axis=-1, keepdims=True)


# --- sphere grids and functions --------------------------------------------------


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature grid on S^1 (``kind="circle"``) or S^2 (``kind="sphere"``).

    The circle grid has ``resolution`` equally spaced nodes at angles
    ``2 pi k / resolution``.  The sphere grid has ``resolution`` longitudes
    and ``resolution // 2`` latitude bands with nodes at band midpoints and
    weights proportional to ``sin(polar)``.  Weights sum to 1.
    """

    kind: str
    resolution: int

    def __post_init__(self):
        if self.kind not in ("circle", "sphere"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        r = self.resolution
        if r < 4 or r & (r - 1):
            raise ValueError(f"grid resolution must be a power of two >= 4, got {r}")

    @property
    def dim(self) -> int:
        """Ambient dimension d; the grid sphere is S^{d-2}."""
        return 3 if self.kind == "circle" else 4

    def coordinates(self) -> np.ndarray:
        """Node angles: ``(N,)`` for the circle, ``(N, 2)`` (polar, azimuth) for the sphere."""
        r = self.resolution
        if self.kind == "circle":
            return 2.0 * np.pi * np.arange(r) / r
        polar = (np.arange(r // 2) + 0.5) * np.pi / (r // 2)
        azim = 2.0 * np.pi * np.arange(r) / r
        p, a = np.meshgrid(polar, azim, indexing="ij")
        return np.column_stack([p.ravel(), a.ravel()])

    def nodes(self) -> np.ndarray:
        c = self.coordinates()
        if self.kind == "circle":
            return np.column_stack([np.cos(c), np.sin(c)])
        p, a = c[:, 0], c[:, 1]
        return np.column_stack([np.sin(p) * np.cos(a), np.sin(p) * np.sin(a), np.cos(p)])

    def weights(self) -> np.ndarray:
        if self.kind == "circle":
            return np.full(self.resolution, 1.0 / self.resolution)
        w = np.sin(self.coordinates()[:, 0])
        return w / w.sum()

    def __len__(self) -> int:
        r = self.resolution
        return r if self.kind == "circle" else r * (r // 2)


@dataclass(frozen=True)
class SphereFunction:
    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (len(self.grid),):
            raise GridMismatch(f"expected {len(self.grid)} values, got shape {v.shape}")
        if np.any(~np.isfinite(v)) or np.any(v < 0.0):
            raise ValueError("function values must be finite and nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return float(self.grid.weights() @ self.values)

    def scaled(self, c: float) -> "SphereFunction":
        return SphereFunction(self.grid, c * self.values)


def load_sphere_function(path, kind: str | None = None) -> SphereFunction:
    """Read a grid function from CSV.

    Circle rows are ``angle,value``; sphere rows are ``polar,azimuth,value``
    (radians).  A header row is allowed.  Nodes must match the uniform grid
    of the inferred resolution exactly up to 1e-9 in any row order.
    """
    rows = []
    with open(Path(path), newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].strip().startswith("#"):
                continue
            try:
                rows.append([float(x) for x in rec])
            except ValueError:
                if rows:
                    raise InputError(f"non-numeric row in {path}: {rec}") from None
    if not rows:
        raise InputError(f"{path} holds no data rows")
    arr = np.array(rows)
    ncol = arr.shape[1]
    inferred = {2: "circle", 3: "sphere"}.get(ncol)
    if inferred is None or (kind is not None and kind != inferred):
        raise InputError(f"{path}: {ncol} columns do not describe a {kind or 'known'} grid")
    n = len(arr)
    res = n if inferred == "circle" else int(round(math.sqrt(2 * n)))
    try:
        grid = SphereGrid(inferred, res)
    except ValueError as exc:
        raise GridMismatch(str(exc)) from None
    if len(grid) != n:
        raise GridMismatch(f"{n} rows do not form a {inferred} grid")
    coords = grid.coordinates().reshape(n, -1)
    got = arr[:, :-1]
    tree = cKDTree(coords)
    dist, idx = tree.query(got)
    if np.max(dist) > 1e-9 or len(np.unique(idx)) != n:
        raise GridMismatch(f"{path}: node coordinates do not match the {inferred} grid")
    values = np.empty(n)
    values[idx] = arr[:, -1]
    return SphereFunction(grid, values)


def save_sphere_function(fn: SphereFunction, path) -> None:
    coords = fn.grid.coordinates().reshape(len(fn.grid), -1)
    header = ["angle", "value"] if fn.grid.kind == "circle" else ["polar", "azimuth", "value"]
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for c, v in zip(coords, fn.values):
            w.writerow([repr(float(x)) for x in c] + [repr(float(v))])


# --- Prekopa-Leindler verification -------------------------------------------------


@dataclass(frozen=True)
class SPLResult:
    lhs: float
    rhs: float
    holds: bool
    h: np.ndarray


def pair_weight(theta, lam: float, d: int):
    """``sinc^{e}(theta) / (sinc^{e}((1-lam) theta)^{1-lam} sinc^{e}(lam theta)^{lam})``, ``e = d - 3``."""
    e = d - 3
    if e == 0:
        return np.ones_like(np.asarray(theta, dtype=float))
    return sinc(theta) ** e / (sinc((1 - lam) * theta) ** (e * (1 - lam)) * sinc(lam * theta) ** (e * lam))


def _circle_envelope(f: np.ndarray, g: np.ndarray, lam: float) -> np.ndarray:
    n = len(f)
    half = n // 2
    delta = np.arange(n) - half
    theta = 2.0 * np.pi * np.abs(delta) / n
    weight = pair_weight(theta, lam, 3)
    weight = np.where(theta >= math.pi - ANTIPODAL_MARGIN, 0.0, weight)
    # Q2 sits a fraction (1 - lam) of the way from Q1 to Q3.
    offset = np.floor((1.0 - lam) * delta + 0.5).astype(np.int64)
    return _kernels.circle_envelope(
        np.ascontiguousarray(f ** (1.0 - lam)),
        np.ascontiguousarray(g**lam),
        np.ascontiguousarray(weight, dtype=float),
        np.ascontiguousarray(offset),
    )


def _sphere_envelope(grid: SphereGrid, f: np.ndarray, g: np.ndarray, lam: float) -> np.ndarray:
    nodes = grid.nodes()
    tree = cKDTree(nodes)
    fp = f ** (1.0 - lam)
    gp = g**lam
    h = np.zeros(len(nodes))
    cols = np.flatnonzero(gp > 0)
    for i in np.flatnonzero(fp > 0):
        q3 = nodes[cols]
        theta = geodesic_angle(nodes[i], q3)
        keep = theta < math.pi - ANTIPODAL_MARGIN
        if not np.any(keep):
            continue
        q2 = geodesic_combine(np.broadcast_to(nodes[i], q3[keep].shape), q3[keep], lam)
        _, k = tree.query(q2)
        vals = fp[i] * gp[cols[keep]] * pair_weight(theta[keep], lam, grid.dim)
        np.maximum.at(h, k, vals)
    return h


def sup_convolution(f: SphereFunction, g: SphereFunction, lam: float) -> np.ndarray:
    """Smallest grid function satisfying the pairwise hypothesis at every node pair."""
    if f.grid != g.grid:
        raise GridMismatch("f and g must live on the same grid")
    if f.grid.kind == "circle":
        return _circle_envelope(np.asarray(f.values), np.asarray(g.values), lam)
    return _sphere_envelope(f.grid, np.asarray(f.values), np.asarray(g.values), lam)


def spl_verify(f: SphereFunction, g: SphereFunction, lam: float = 0.5, slack: float = 1e-2) -> SPLResult:
    """Check ``integral h >= (integral f)^(1-lam) (integral g)^lam`` for the minimal ``h``.

    ``holds`` is ``lhs >= rhs * (1 - slack)``; the slack absorbs snapping of
    the combined point to the nearest grid node.  If either integral
    vanishes the right side is 0 and the inequality holds trivially.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if f.grid != g.grid:
        raise GridMismatch("f and g must live on the same grid")
    int_f, int_g = f.integral(), g.integral()
    if int_f == 0.0 or int_g == 0.0:
        return SPLResult(0.0, 0.0, True, np.zeros(len(f.grid)))
    h = sup_convolution(f, g, lam)
    lhs = float(f.grid.weights() @ h)
    rhs = int_f ** (1.0 - lam) * int_g**lam
    return SPLResult(lhs, rhs, bool(lhs >= rhs * (1.0 - slack)), h)


def random_smooth_function(grid: SphereGrid, rng: np.random.Generator, modes: int = 6) -> SphereFunction:
    """Strictly positive random trigonometric (circle) or low-degree polynomial (sphere) function."""
    if grid.kind == "circle":
        ang = grid.coordinates()
        k = np.arange(1, modes + 1)
        amp = rng.normal(size=modes) / k
        phase = rng.uniform(0, 2 * np.pi, size=modes)
        vals = np.exp(np.sin(np.outer(ang, k) + phase) @ amp)
    else:
        x = grid.nodes()
        coef = rng.normal(size=(3, 3)) / 2
        lin = rng.normal(size=3)
        vals = np.exp(np.einsum("ni,ij,nj->n", x, coef, x) + x @ lin)
    return SphereFunction(grid, vals)
