"""Mean width of simplexes inscribed in the unit ball.

Monte Carlo mean-width integrators, spherical Voronoi cells and centroids,
the longitudinal shear of the sphere, numerical checks of the supporting
inequalities, and a Lloyd-type centroid ascent toward the regular simplex.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import *  # noqa: F401,F403
from .sphere import MonteCarloEstimate, covers_sphere, min_enclosing_ball, project, sample_uniform
from .simplex import (
    EuclideanSimplex,
    SphericalSimplex,
    circumcenters,
    regular_simplex,
    regularity_distance,
    support,
    voronoi_assign,
)
from .meanwidth import MeanWidthReport, mean_width_cells, mean_width_mc
from .shear import ShearMap

__all__ = [
    "BACKEND",
    "EuclideanSimplex",
    "MeanWidthReport",
    "MonteCarloEstimate",
    "ShearMap",
    "SphericalSimplex",
    "circumcenters",
    "covers_sphere",
    "mean_width_cells",
    "mean_width_mc",
    "min_enclosing_ball",
    "project",
    "regular_simplex",
    "regularity_distance",
    "sample_uniform",
    "support",
    "voronoi_assign",
]
