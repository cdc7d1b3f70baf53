"""Pure numpy versions of the compiled kernels (same signatures and semantics)."""

import numpy as np


def cell_accumulate(x, v):
    x = np.ascontiguousarray(x, dtype=float)
    v = np.ascontiguousarray(v, dtype=float)
    if x.shape[1] != v.shape[1]:
        raise ValueError("dimension mismatch between samples and vertices")
    k = v.shape[0]
    dots = x @ v.T
    idx = np.argmax(dots, axis=1)
    h = dots[np.arange(len(x)), idx]
    counts = np.bincount(idx, minlength=k).astype(np.int64)
    cell_sum = np.bincount(idx, weights=h, minlength=k)
    cell_sq = np.bincount(idx, weights=h * h, minlength=k)
    resultant = np.stack(
        [np.bincount(idx, weights=x[:, j], minlength=k) for j in range(x.shape[1])], axis=1
    )
    return counts, cell_sum, cell_sq, resultant, float(np.sum(h)), float(np.dot(h, h))


def circle_envelope(f_pow, g_pow, weight, offset):
    f_pow = np.asarray(f_pow, dtype=float)
    g_pow = np.asarray(g_pow, dtype=float)
    n = len(f_pow)
    half = n // 2
    h = np.zeros(n)
    for a in range(n):
        w = weight[a]
        if w == 0.0:
            continue
        delta = a - half
        vals = f_pow * np.roll(g_pow, -delta) * w
        # Destination of node i is i + offset[a]: a cyclic shift.
        np.maximum(h, np.roll(vals, int(offset[a])), out=h)
    return h
