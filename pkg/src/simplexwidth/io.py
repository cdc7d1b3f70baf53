"""Simplex JSON files.

A Euclidean simplex file is ``{"dim": d, "vertices": [[...d floats...] x (d+1)]}``.
A spherical simplex file uses ``"generators"`` (d rows) instead of
``"vertices"``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InputError
from .simplex import UNIT_TOL, EuclideanSimplex, SphericalSimplex


def _read_json(path) -> dict:
    try:
        with open(Path(path)) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return data


def _matrix(data: dict, key: str, path) -> tuple[int, np.ndarray]:
    if "dim" not in data or key not in data:
        raise InputError(f"{path}: expected keys 'dim' and '{key}'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError(f"{path}: 'dim' must be a positive integer")
    try:
        arr = np.array(data[key], dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{path}: '{key}' must be a list of numeric rows") from None
    if arr.ndim != 2 or arr.shape[1] != dim or not np.all(np.isfinite(arr)):
        raise InputError(f"{path}: '{key}' must be finite rows of length {dim}")
    return dim, arr


def parse_simplex(data: dict, normalize: bool = False, test_mode: bool = False, path="<data>") -> EuclideanSimplex:
    """Build a simplex from decoded JSON.

    Schema problems raise :class:`InputError`; geometric ones (degenerate
    vertices) propagate as :class:`DegenerateSimplex` from the constructor.
    """
    dim, v = _matrix(data, "vertices", path)
    if not test_mode and len(v) != dim + 1:
        raise InputError(f"{path}: expected {dim + 1} vertices, got {len(v)}")
    norms = np.linalg.norm(v, axis=1)
    if normalize:
        if np.any(norms == 0):
            raise InputError(f"{path}: cannot normalize a zero vertex")
        v = v / norms[:, None]
    elif not test_mode and np.max(np.abs(norms - 1.0)) > UNIT_TOL:
        raise InputError(f"{path}: vertices are not unit norm within {UNIT_TOL} (use --normalize)")
    return EuclideanSimplex(v, test_mode=test_mode)


def load_simplex(path, normalize: bool = False, test_mode: bool = False) -> EuclideanSimplex:
    return parse_simplex(_read_json(path), normalize, test_mode, path)


def load_spherical_simplex(path) -> SphericalSimplex:
    data = _read_json(path)
    _, g = _matrix(data, "generators", path)
    return SphericalSimplex(g)


def simplex_to_dict(simplex: EuclideanSimplex) -> dict:
    return {"dim": simplex.dim, "vertices": simplex.vertices.tolist()}


def dump_simplex(simplex: EuclideanSimplex, path) -> None:
    with open(Path(path), "w") as fh:
        json.dump(simplex_to_dict(simplex), fh, indent=2)
        fh.write("\n")
