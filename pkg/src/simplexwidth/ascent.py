"""Centroid ascent: replace every vertex by the spherical centroid of its Voronoi cell.

For any partition of the sphere into regions ``R_i``,
``sum_i int_{R_i} x.v_i <= sum_i int_{V_i} x.v_i`` (the Voronoi partition is
optimal), and for a fixed region ``int_R x.X <= int_R x.G(R)`` (the centroid
is the best single direction).  Applying the second inequality cell by cell
and then the first to the new vertices shows that one step never decreases
the mean width.  :func:`verify_switch_region` and :func:`verify_switch_point`
check both inequalities exactly on a shared sample stream.

Each iteration draws a fresh stream with seed ``derive_seed(seed, k)``.  The
ascent defaults to the scrambled-Sobol sampler: with independent samples the
centroid noise at ``n = 10**6`` (a few ``1e-3`` rad) is larger than a
``1e-3`` movement tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateSimplex, EmptyCell, NotCovering, UndefinedCentroid
from .meanwidth import MeanWidthReport, accumulate_cells
from .simplex import EuclideanSimplex, circumcenters, regularity_distance
from .sphere import (
    angle_between,
    covers_sphere,
    derive_seed,
    min_enclosing_ball,
    uniform_chunks,
)
from .strips import RESULTANT_FLOOR, Region, region_resultant

MIN_CELL_SAMPLES = 10
DEFAULT_SAMPLER = "sobol"


@dataclass(frozen=True)
class AscentStep:
    simplex: EuclideanSimplex
    report: MeanWidthReport
    regularity: float
    movement: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "vertices": self.simplex.vertices.tolist(),
            "mean_width": self.report.total.value,
            "mean_width_std_error": self.report.total.std_error,
            "cell_measures": list(self.report.cell_measures),
            "regularity_distance": self.regularity,
            "max_vertex_movement": self.movement,
            "step_seed": self.seed,
        }


@dataclass
class AscentTrajectory:
    """Simplexes visited by the ascent.

    ``steps[0]`` is the start (movement 0); ``steps[k]`` is the simplex after
    ``k`` centroid steps with the movement of that step.
    """

    steps: list[AscentStep] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0

    @property
    def final(self) -> AscentStep:
        return self.steps[-1]

    def mean_widths(self) -> np.ndarray:
        return np.array([s.report.total.value for s in self.steps])

    def is_monotone(self, sigmas: float = 3.0) -> bool:
        """Whether no step drops by more than ``sigmas`` combined standard errors."""
        for prev, nxt in zip(self.steps, self.steps[1:]):
            a, b = prev.report.total, nxt.report.total
            if b.value < a.value - sigmas * math.hypot(a.std_error, b.std_error):
                return False
        return True


@dataclass(frozen=True)
class CentroidMap:
    """One pass of the centroid map: the new vertices and what was measured on the way."""

    vertices: np.ndarray
    report: MeanWidthReport
    counts: np.ndarray


def _require_cover(simplex: EuclideanSimplex):
    if not covers_sphere(simplex.vertices):
        raise NotCovering(
            "the closed hemispheres at the vertices do not cover the sphere; "
            "some direction is farther than 90 degrees from every vertex"
        )


def centroid_map(simplex: EuclideanSimplex, n: int, seed: int, sampler: str = DEFAULT_SAMPLER) -> CentroidMap:
    """Centroids of all Voronoi cells, with the mean-width report from the same pass."""
    _require_cover(simplex)
    t = accumulate_cells(simplex.vertices, n, seed, sampler)
    small = np.flatnonzero(t.counts < MIN_CELL_SAMPLES)
    if len(small):
        raise EmptyCell(
            f"Voronoi cell(s) {small.tolist()} received fewer than {MIN_CELL_SAMPLES} of {n} samples"
        )
    norms = np.linalg.norm(t.resultant, axis=1) / n
    if np.any(norms < RESULTANT_FLOOR):
        raise UndefinedCentroid("a Voronoi cell has a vanishing resultant")
    new = t.resultant / np.linalg.norm(t.resultant, axis=1, keepdims=True)
    return CentroidMap(new, MeanWidthReport.from_totals(t), t.counts)


def lloyd_step(
    simplex: EuclideanSimplex, n: int = 10**6, seed: int = 0, sampler: str = DEFAULT_SAMPLER
) -> EuclideanSimplex:
    """Move every vertex to the spherical centroid of its Voronoi cell (order preserved)."""
    return EuclideanSimplex(centroid_map(simplex, n, seed, sampler).vertices)


def ascend(
    simplex: EuclideanSimplex,
    tol: float = 1e-3,
    max_iters: int = 500,
    n: int = 10**6,
    seed: int = 0,
    sampler: str = DEFAULT_SAMPLER,
    callback: Callable[[AscentStep], None] | None = None,
) -> AscentTrajectory:
    """Iterate :func:`lloyd_step` until the largest vertex movement drops below ``tol``.

    Reaching ``max_iters`` is reported through ``converged = False``, not an
    exception.
    """
    _require_cover(simplex)
    traj = AscentTrajectory()
    current = simplex
    movement = 0.0
    for k in range(max_iters):
        step_seed = derive_seed(seed, k)
        cm = centroid_map(current, n, step_seed, sampler)
        step = AscentStep(current, cm.report, regularity_distance(current), movement, step_seed)
        traj.steps.append(step)
        if callback is not None:
            callback(step)
        movement = float(np.max(angle_between(current.vertices, cm.vertices)))
        current = EuclideanSimplex(cm.vertices)
        traj.iterations = k + 1
        if movement < tol:
            traj.converged = True
            break
    final_seed = derive_seed(seed, traj.iterations)
    t = accumulate_cells(current.vertices, n, final_seed, sampler)
    step = AscentStep(current, MeanWidthReport.from_totals(t), regularity_distance(current), movement, final_seed)
    traj.steps.append(step)
    if callback is not None:
        callback(step)
    return traj


# --- the two switching inequalities ----------------------------------------------


@dataclass(frozen=True)
class SwitchCheck:
    lhs: float
    rhs: float
    holds: bool

    @property
    def gap(self) -> float:
        return self.rhs - self.lhs


def verify_switch_region(
    simplex: EuclideanSimplex,
    partition_assignment: Callable[[np.ndarray], np.ndarray],
    n: int = 10**5,
    seed: int = 0,
    sampler: str = "gaussian",
) -> SwitchCheck:
    """Compare ``sum_i int_{R_i} x.v_i`` (lhs) with the Voronoi sum (rhs).

    ``partition_assignment`` labels each sample row with a region index in
    ``0..d``.  Both sums are formed from the same dot products in the same
    order, so the Voronoi labelling reproduces rhs exactly.
    """
    v = simplex.vertices
    lhs_parts, rhs_parts = [], []
    for x in uniform_chunks(simplex.dim, n, seed, sampler):
        dots = x @ v.T
        labels = np.asarray(partition_assignment(x))
        if labels.shape != (len(x),) or labels.min() < 0 or labels.max() >= len(v):
            raise ValueError("partition must map every sample to an index in 0..d")
        lhs_parts.append(dots[np.arange(len(x)), labels].sum())
        rhs_parts.append(dots.max(axis=1).sum())
    lhs = math.fsum(lhs_parts) / n
    rhs = math.fsum(rhs_parts) / n
    return SwitchCheck(lhs, rhs, lhs <= rhs + 1e-12)


def verify_switch_point(
    region: Region, point, n: int = 10**5, seed: int = 0, sampler: str = "gaussian"
) -> SwitchCheck:
    """Compare ``int_R x.X`` (lhs) with ``int_R x.G(R)`` (rhs) on one sample stream."""
    total, _, count = region_resultant(region, n, seed, sampler)
    if count == 0 or np.linalg.norm(total) / n < RESULTANT_FLOOR:
        raise UndefinedCentroid(f"resultant of {region.label} is too small to project")
    g = total / np.linalg.norm(total)
    lhs = float(total @ np.asarray(point, dtype=float)) / n
    rhs = float(total @ g) / n
    return SwitchCheck(lhs, rhs, lhs <= rhs + 1e-12)


# --- necessary conditions for a maximizer ------------------------------------------


@dataclass(frozen=True)
class NecessaryConditions:
    smallest_ball_is_unit: bool
    unit_vertices: bool
    hemispheres_cover: bool
    ball_center: tuple
    ball_radius: float

    @property
    def all_hold(self) -> bool:
        return self.smallest_ball_is_unit and self.unit_vertices and self.hemispheres_cover

    def to_dict(self) -> dict:
        return {
            "smallest_ball_is_unit": self.smallest_ball_is_unit,
            "unit_vertices": self.unit_vertices,
            "hemispheres_cover": self.hemispheres_cover,
            "ball_center": list(self.ball_center),
            "ball_radius": self.ball_radius,
        }


def check_necessary_conditions(simplex: EuclideanSimplex) -> NecessaryConditions:
    v = simplex.vertices
    center, radius = min_enclosing_ball(v)
    ball_ok = bool(np.linalg.norm(center) <= 1e-6 and abs(radius - 1.0) <= 1e-6)
    unit = bool(np.max(np.abs(np.linalg.norm(v, axis=1) - 1.0)) <= 1e-9)
    try:
        cover = covers_sphere(v)
    except (DegenerateSimplex, ValueError):
        cover = False
    return NecessaryConditions(ball_ok, unit, cover, tuple(center.tolist()), radius)


def circumcenter_spread(simplex: EuclideanSimplex) -> float:
    """Spread (max - min) of the pairwise dot products of the face circumcenters."""
    c = circumcenters(simplex)
    dots = (c @ c.T)[np.triu_indices(len(c), 1)]
    return float(dots.max() - dots.min())
