"""Monte Carlo mean width of a simplex.

``w = 2 E[max_i X . v_i]`` for ``X`` uniform on the sphere.  Splitting the
expectation over the Voronoi cells of the vertices gives
``w = 2 sum_i E[X . v_i ; X in V_i]``.  Both forms are evaluated from one
fused pass over the sample stream, so for equal seeds the direct estimate
and the total of the per-cell report are the same floating-point number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .simplex import EuclideanSimplex
from .sphere import MonteCarloEstimate, uniform_chunks

DEFAULT_SAMPLES = 10**6
MIN_SAMPLES = 10**3


@dataclass(frozen=True)
class CellTotals:
    """Raw per-cell sums from one pass over ``n`` samples."""

    counts: np.ndarray
    cell_sum: np.ndarray
    cell_sq: np.ndarray
    resultant: np.ndarray
    total: float
    total_sq: float
    n: int
    seed: int


def accumulate_cells(vertices: np.ndarray, n: int, seed: int, sampler: str = "gaussian") -> CellTotals:
    """Run the cell kernel over the whole sample stream.

    Chunk results are combined with ``math.fsum`` in chunk order, which makes
    the reduction independent of anything but ``(n, seed, sampler)``.
    """
    v = np.ascontiguousarray(vertices, dtype=float)
    k, d = v.shape
    parts = [_kernels.cell_accumulate(x, v) for x in uniform_chunks(d, n, seed, sampler)]
    counts = np.sum([p[0] for p in parts], axis=0)
    cell_sum = np.array([math.fsum(p[1][i] for p in parts) for i in range(k)])
    cell_sq = np.array([math.fsum(p[2][i] for p in parts) for i in range(k)])
    resultant = np.array(
        [[math.fsum(p[3][i, j] for p in parts) for j in range(d)] for i in range(k)]
    ).reshape(k, d)
    total = math.fsum(p[4] for p in parts)
    total_sq = math.fsum(p[5] for p in parts)
    return CellTotals(counts, cell_sum, cell_sq, resultant, total, total_sq, n, seed)


@dataclass(frozen=True)
class MeanWidthReport:
    total: MonteCarloEstimate
    per_cell: tuple[MonteCarloEstimate, ...]
    cell_measures: tuple[float, ...]

    @classmethod
    def from_totals(cls, t: CellTotals) -> "MeanWidthReport":
        per_cell = tuple(
            MonteCarloEstimate.from_sums(t.cell_sum[i], t.cell_sq[i], t.n, t.seed, scale=2.0)
            for i in range(len(t.counts))
        )
        measures = tuple(float(c) / t.n for c in t.counts)
        return cls(
            total=MonteCarloEstimate.from_sums(t.total, t.total_sq, t.n, t.seed, scale=2.0),
            per_cell=per_cell,
            cell_measures=measures,
        )

    def to_dict(self) -> dict:
        return {
            "total": self.total.to_dict(),
            "per_cell": [c.to_dict() for c in self.per_cell],
            "cell_measures": list(self.cell_measures),
        }


def _check(simplex: EuclideanSimplex, n: int):
    if not isinstance(simplex, EuclideanSimplex):
        raise TypeError("expected an EuclideanSimplex")
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")


def mean_width_mc(
    simplex: EuclideanSimplex, n: int = DEFAULT_SAMPLES, seed: int = 0, sampler: str = "gaussian"
) -> MonteCarloEstimate:
    """Direct estimate of ``2 E[max_i X . v_i]``."""
    _check(simplex, n)
    t = accumulate_cells(simplex.vertices, n, seed, sampler)
    return MonteCarloEstimate.from_sums(t.total, t.total_sq, n, seed, scale=2.0)


def mean_width_cells(
    simplex: EuclideanSimplex, n: int = DEFAULT_SAMPLES, seed: int = 0, sampler: str = "gaussian"
) -> MeanWidthReport:
    """Mean width split into Voronoi-cell contributions and cell measures."""
    _check(simplex, n)
    return MeanWidthReport.from_totals(accumulate_cells(simplex.vertices, n, seed, sampler))
