"""Primitive operations on the unit sphere S^{d-1}.

Points of the sphere are plain ``float64`` numpy arrays of shape ``(d,)`` (or
``(m, d)`` for batches).  Every integral in the package is a Monte Carlo
average over a reproducible stream of uniform directions produced by
:func:`uniform_chunks`.

RNG
---
Independent samples use numpy's ``Philox`` counter-based generator.  The
stream is cut into fixed chunks of :data:`CHUNK` points and chunk ``c`` is
drawn from ``Philox(SeedSequence(seed, spawn_key=(c,)))``, so a chunk's
content depends only on ``(seed, c)`` and not on how many chunks are
consumed.

The ``"sobol"`` sampler is a randomized quasi-Monte Carlo stream: scrambled
Sobol points pushed through the standard normal quantile function and then
normalized.  Each point is still marginally uniform on the sphere, but the
points are negatively correlated, which cuts the error of smooth averages
by an order of magnitude.  The centroid ascent uses it by default.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import DegenerateSimplex, ZeroVector

CHUNK = 1 << 16
SAMPLERS = ("gaussian", "sobol")

_SEED_MASK = (1 << 64) - 1
_SOBOL_KEY = 0x50B01
_ZERO_NORM = 1e-300
_AFFINE_TOL = 1e-10
_EXHAUSTIVE_MAX = 12


@dataclass(frozen=True)
class MonteCarloEstimate:
    """A Monte Carlo average with its standard error.

    ``std_error`` is the sample standard deviation divided by
    ``sqrt(n_samples)``.
    """

    value: float
    std_error: float
    n_samples: int
    seed: int

    @classmethod
    def from_sums(cls, total: float, total_sq: float, n: int, seed: int, scale: float = 1.0):
        """Build an estimate of ``scale * E[Y]`` from ``sum(Y)`` and ``sum(Y**2)``."""
        mean = total / n
        var = (total_sq - total * mean) / (n - 1) if n > 1 else 0.0
        return cls(
            value=scale * mean,
            std_error=abs(scale) * math.sqrt(max(var, 0.0) / n),
            n_samples=int(n),
            seed=int(seed),
        )

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }


def normalize_seed(seed: int) -> int:
    return int(seed) & _SEED_MASK


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministically derive a 64-bit child seed from ``seed`` and integer keys."""
    ss = np.random.SeedSequence(normalize_seed(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rng_for(seed: int, *keys: int) -> np.random.Generator:
    """A Philox generator keyed by ``seed`` and optional integer keys."""
    ss = np.random.SeedSequence(normalize_seed(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


def project(x) -> np.ndarray:
    """Radially project a nonzero vector (or each row of an array) onto the sphere."""
    x = np.asarray(x, dtype=float)
    norms = np.linalg.norm(x, axis=-1, keepdims=True)
    if np.any(norms < _ZERO_NORM):
        raise ZeroVector("cannot project the zero vector onto the sphere")
    return x / norms


def as_unit(x, tol: float = 1e-12) -> np.ndarray:
    """Validate that ``x`` is a unit vector and return it as an array."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a single vector, got shape {x.shape}")
    if abs(np.linalg.norm(x) - 1.0) > tol:
        raise ValueError(f"vector is not unit norm (|x| = {np.linalg.norm(x)!r})")
    return x


def angle_between(u, v) -> np.ndarray:
    """Geodesic distance between unit vectors, accurate near 0 and pi."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return 2.0 * np.arctan2(np.linalg.norm(u - v, axis=-1), np.linalg.norm(u + v, axis=-1))


def _gaussian_chunk(d: int, m: int, seed: int, index: int) -> np.ndarray:
    z = rng_for(seed, index).standard_normal((m, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z


def uniform_chunks(d: int, n: int, seed: int, sampler: str = "gaussian") -> Iterator[np.ndarray]:
    """Yield ``n`` uniform points of S^{d-1} in chunks of at most :data:`CHUNK` rows."""
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    if sampler == "gaussian":
        for c, start in enumerate(range(0, n, CHUNK)):
            yield _gaussian_chunk(d, min(CHUNK, n - start), seed, c)
    elif sampler == "sobol":
        engine = qmc.Sobol(d, scramble=True, seed=rng_for(seed, _SOBOL_KEY))
        lo = np.nextafter(0.0, 1.0)
        hi = np.nextafter(1.0, 0.0)
        for start in range(0, n, CHUNK):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                u = engine.random(min(CHUNK, n - start))
            z = ndtri(np.clip(u, lo, hi))
            z /= np.linalg.norm(z, axis=1, keepdims=True)
            yield z
    else:
        raise ValueError(f"unknown sampler {sampler!r}; expected one of {SAMPLERS}")


def sample_uniform(d: int, n: int, seed: int, sampler: str = "gaussian") -> np.ndarray:
    """Return an ``(n, d)`` array of uniform points on S^{d-1}.

    The rows are exactly the concatenation of :func:`uniform_chunks` for the
    same arguments.
    """
    if d < 3:
        raise ValueError(f"dimension must be at least 3, got {d}")
    return np.concatenate(list(uniform_chunks(d, n, seed, sampler)), axis=0)


def random_orthogonal(d: int, seed: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign fixed)."""
    a = rng_for(seed).standard_normal((d, d))
    q, r = np.linalg.qr(a)
    return q * np.sign(np.diag(r))


# --- enclosing balls -------------------------------------------------------


def _circumsphere(points: np.ndarray):
    """Smallest sphere through all ``points`` with center in their affine hull.

    Returns ``None`` when the points are affinely dependent.
    """
    p0 = points[0]
    if len(points) == 1:
        return p0.copy(), 0.0
    a = points[1:] - p0
    gram = a @ a.T
    if np.linalg.svd(a, compute_uv=False)[-1] < _AFFINE_TOL:
        return None
    lam = np.linalg.solve(gram, 0.5 * np.einsum("ij,ij->i", a, a))
    center = p0 + lam @ a
    radius = float(np.max(np.linalg.norm(points - center, axis=1)))
    return center, radius


def _contains_all(center, radius, pts, tol=1e-9) -> bool:
    return bool(np.all(np.linalg.norm(pts - center, axis=1) <= radius + tol))


def _exhaustive_ball(pts: np.ndarray):
    n, d = pts.shape
    best = None
    for k in range(1, min(n, d + 1) + 1):
        for idx in itertools.combinations(range(n), k):
            ball = _circumsphere(pts[list(idx)])
            if ball is None:
                continue
            c, r = ball
            if (best is None or r < best[1]) and _contains_all(c, r, pts):
                best = (c, r)
    return best


def _welzl(pts: np.ndarray, boundary: list, d: int):
    ball = _circumsphere(np.array(boundary)) if boundary else None
    if len(boundary) == d + 1:
        return ball
    for i in range(len(pts)):
        p = pts[i]
        if ball is None or np.linalg.norm(p - ball[0]) > ball[1] + 1e-12:
            ball = _welzl(pts[:i], boundary + [p], d)
    return ball


def min_enclosing_ball(points) -> tuple[np.ndarray, float]:
    """Smallest Euclidean ball containing a finite point set.

    Sets of at most 12 points are solved by enumerating every affinely
    independent support subset; larger sets use Welzl's move-to-front
    recursion on a fixed shuffle.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 0:
        raise ValueError("point set is empty")
    if pts.shape[0] <= _EXHAUSTIVE_MAX:
        center, radius = _exhaustive_ball(pts)
    else:
        order = rng_for(0x3E1).permutation(pts.shape[0])
        center, radius = _welzl(pts[order], [], pts.shape[1])
    return np.asarray(center, dtype=float), float(radius)


# --- covering ---------------------------------------------------------------


def edge_singular_value(vertices: np.ndarray) -> float:
    """Smallest singular value of the edge matrix ``v_i - v_0``."""
    edges = vertices[1:] - vertices[0]
    return float(np.linalg.svd(edges, compute_uv=False)[-1])


def barycentric_origin(vertices: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of the origin with respect to d+1 points in R^d."""
    v = np.asarray(vertices, dtype=float)
    n, d = v.shape
    if n != d + 1:
        raise ValueError(f"need d+1 = {d + 1} vertices, got {n}")
    if edge_singular_value(v) < _AFFINE_TOL:
        raise DegenerateSimplex("vertices are affinely dependent")
    a = np.vstack([v.T, np.ones(n)])
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    return np.linalg.solve(a, rhs)


def covers_sphere(vertices: Sequence) -> bool:
    """Whether the closed hemispheres centred at the vertices cover the sphere.

    Equivalent to the origin lying in the convex hull of the vertices.
    """
    return bool(np.all(barycentric_origin(np.asarray(vertices, dtype=float)) >= -1e-10))
