"""The longitudinal shear of the sphere.

``M_s`` is the identity except for the entry ``M_s[1, 0] = s``, so it adds
``s * x_1`` to the second coordinate.  ``f_s(x) = project(M_s x)`` fixes the
great sphere ``{x_1 = 0}`` pointwise and moves the slope ``x_2 / x_1`` of
every point of the open hemisphere ``x_1 > 0`` by exactly ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sphere import project


@dataclass(frozen=True)
class ShearMap:
    s: float
    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("the shear needs at least two coordinates")

    def matrix(self) -> np.ndarray:
        m = np.eye(self.dim)
        m[1, 0] = self.s
        return m

    def inverse(self) -> "ShearMap":
        return ShearMap(-self.s, self.dim)

    def linear(self, x) -> np.ndarray:
        """``M_s x`` without forming the matrix (rows of ``x`` may be batched)."""
        y = np.array(x, dtype=float)
        y[..., 1] += self.s * y[..., 0]
        return y

    def apply(self, x) -> np.ndarray:
        # |M_s x| >= |x_1|, and is 1 when x_1 = 0, so it never vanishes on the sphere.
        return project(self.linear(x))

    __call__ = apply

    def jacobian(self, x) -> np.ndarray:
        """Surface Jacobian of ``f_s`` at ``x``: ``|M_s x|^{-d}``."""
        x = np.asarray(x, dtype=float)
        x1, x2 = x[..., 0], x[..., 1]
        return (1.0 + (x2 + self.s * x1) ** 2 - x2**2) ** (-self.dim / 2.0)

    def pushforward_density(self, x) -> np.ndarray:
        """Density of the image of the uniform measure under ``f_s``."""
        return self.inverse().jacobian(x)

    def map_pole(self, pole) -> np.ndarray:
        """Pole of the image of the great sphere ``{x : x . pole = 0}``."""
        return project(ShearMap(-self.s, self.dim).matrix().T @ np.asarray(pole, dtype=float))


def slope(x) -> np.ndarray:
    """``x_2 / x_1`` for points of the open hemisphere ``x_1 > 0``."""
    x = np.asarray(x, dtype=float)
    return x[..., 1] / x[..., 0]


def tangent_frame(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis (as rows) of the tangent space of the sphere at ``x``."""
    d = len(x)
    q, _ = np.linalg.qr(np.column_stack([x, np.eye(d)]))
    return q[:, 1:d].T


def finite_difference_jacobian(shear: ShearMap, x, step: float = 1e-5) -> float:
    """Central-difference estimate of the surface Jacobian of ``shear`` at ``x``.

    Moves along geodesics in an orthonormal tangent frame at ``x``, maps
    through the shear, expresses the differences in a tangent frame at the
    image and takes the absolute determinant.
    """
    x = np.asarray(x, dtype=float)
    frame = tangent_frame(x)
    y = shear.apply(x)
    out_frame = tangent_frame(y)
    cols = []
    for u in frame:
        plus = shear.apply(np.cos(step) * x + np.sin(step) * u)
        minus = shear.apply(np.cos(step) * x - np.sin(step) * u)
        cols.append(out_frame @ (plus - minus) / (2.0 * step))
    return float(abs(np.linalg.det(np.column_stack(cols))))
