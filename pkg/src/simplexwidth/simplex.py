"""Euclidean simplexes inscribed in the ball and spherical simplexes on its boundary."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFace, DegenerateSimplex, SingularGenerators
from .sphere import edge_singular_value, project, random_orthogonal

UNIT_TOL = 1e-9
AFFINE_TOL = 1e-10
CONE_TOL = -1e-10


@dataclass(frozen=True)
class EuclideanSimplex:
    """conv(v_0, ..., v_d) with unit vertices, stored as a ``(d+1, d)`` array.

    ``test_mode`` drops the vertex-count, unit-norm and affine-independence
    checks so that points and segments can serve as analytic anchors.
    """

    vertices: np.ndarray
    test_mode: bool = field(default=False, compare=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2:
            raise DegenerateSimplex(f"vertices must be a 2-d array, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        if self.test_mode:
            return
        n, d = v.shape
        if n != d + 1:
            raise DegenerateSimplex(f"a simplex in R^{d} needs {d + 1} vertices, got {n}")
        if d < 3:
            raise DegenerateSimplex(f"dimension must be at least 3, got {d}")
        norms = np.linalg.norm(v, axis=1)
        if np.max(np.abs(norms - 1.0)) > UNIT_TOL:
            raise DegenerateSimplex("vertices must lie on the unit sphere")
        if edge_singular_value(v) < AFFINE_TOL:
            raise DegenerateSimplex("vertices are affinely dependent")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def rotated(self, q: np.ndarray) -> "EuclideanSimplex":
        return EuclideanSimplex(self.vertices @ np.asarray(q).T, test_mode=self.test_mode)


@dataclass(frozen=True)
class SphericalSimplex:
    """Spherical convex hull of d linearly independent unit generators."""

    generators: np.ndarray

    def __post_init__(self):
        g = project(np.array(self.generators, dtype=float))
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise SingularGenerators(f"need d generators in R^d, got shape {g.shape}")
        if np.linalg.svd(g, compute_uv=False)[-1] < AFFINE_TOL:
            raise SingularGenerators("generators are linearly dependent")
        g.setflags(write=False)
        object.__setattr__(self, "generators", g)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def cone_coordinates(self, x) -> np.ndarray:
        """Coefficients c with ``x = sum_j c_j g_j`` (rows of ``x`` may be batched)."""
        x = np.asarray(x, dtype=float)
        return np.linalg.solve(self.generators.T, x.T).T

    def contains(self, x) -> np.ndarray:
        return np.all(self.cone_coordinates(x) >= CONE_TOL, axis=-1)


def regular_simplex(d: int) -> EuclideanSimplex:
    """The regular simplex inscribed in S^{d-1}, with v_0 = e_1."""
    centered = np.eye(d + 1) - 1.0 / (d + 1)
    # Orthonormal basis of the sum-zero hyperplane, rotated so v_0 lands on e_1.
    _, _, wt = np.linalg.svd(centered)
    v = project(centered @ wt[:d].T)
    first = v[0]
    target = np.zeros(d)
    target[0] = 1.0
    v = v @ _reflection_onto(first, target).T
    return EuclideanSimplex(project(v))


def _reflection_onto(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Householder reflection sending unit ``a`` to unit ``b``."""
    u = a - b
    nu = np.linalg.norm(u)
    if nu < 1e-15:
        return np.eye(len(a))
    u /= nu
    return np.eye(len(a)) - 2.0 * np.outer(u, u)


def perturbed_regular(d: int, angle: float, seed: int = 0) -> EuclideanSimplex:
    """Regular simplex with v_0 rotated by ``angle`` radians along a random tangent."""
    v = np.array(regular_simplex(d).vertices)
    q = random_orthogonal(d, seed)
    v = v @ q.T
    tangent = q[:, 1] - (q[:, 1] @ v[0]) * v[0]
    tangent /= np.linalg.norm(tangent)
    v[0] = np.cos(angle) * v[0] + np.sin(angle) * tangent
    return EuclideanSimplex(project(v))


def support(simplex: EuclideanSimplex, x) -> np.ndarray:
    """Support function h(x) = max_i x . v_i (batched over rows of ``x``)."""
    return np.max(np.asarray(x, dtype=float) @ simplex.vertices.T, axis=-1)


def voronoi_assign(simplex: EuclideanSimplex, x) -> np.ndarray:
    """Index of the vertex achieving the support value; ties go to the lowest index."""
    return np.argmax(np.asarray(x, dtype=float) @ simplex.vertices.T, axis=-1)


def face_circumcenter(points: np.ndarray) -> np.ndarray:
    """Circumcenter of a simplex given by its vertex rows, within their affine hull."""
    p0 = points[0]
    a = points[1:] - p0
    lam = np.linalg.solve(a @ a.T, 0.5 * np.einsum("ij,ij->i", a, a))
    return p0 + lam @ a


def circumcenters(simplex: EuclideanSimplex) -> np.ndarray:
    """Row i is the circumcenter of the face opposite v_i, projected to the sphere."""
    v = simplex.vertices
    out = np.empty_like(v)
    for i in range(len(v)):
        c = face_circumcenter(np.delete(v, i, axis=0))
        if np.linalg.norm(c) < 1e-12:
            raise DegenerateFace(f"circumcenter of the face opposite v_{i} is the origin")
        out[i] = c / np.linalg.norm(c)
    return out


def gram(simplex: EuclideanSimplex) -> np.ndarray:
    return simplex.vertices @ simplex.vertices.T


def regular_gram(d: int) -> np.ndarray:
    return (1.0 + 1.0 / d) * np.eye(d + 1) - 1.0 / d


def regularity_distance(simplex: EuclideanSimplex) -> float:
    """Frobenius distance between the vertex Gram matrix and the regular one."""
    return float(np.linalg.norm(gram(simplex) - regular_gram(simplex.dim)))


def spherical_simplex_contains(ss: SphericalSimplex, x) -> np.ndarray:
    return ss.contains(x)
