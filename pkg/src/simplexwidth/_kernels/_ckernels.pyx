# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  Must stay signature-compatible with ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def cell_accumulate(const double[:, ::1] x, const double[:, ::1] v):
    """Fused Voronoi assignment and per-cell accumulation over one chunk.

    Returns ``(counts, cell_sum, cell_sq, resultant, total, total_sq)`` where
    ``h = max_i x.v_i`` is summed per cell and overall (compensated), and
    ``resultant[i]`` is the sum of the sample points assigned to cell ``i``.
    """
    cdef Py_ssize_t m = x.shape[0], d = x.shape[1], k = v.shape[0]
    cdef Py_ssize_t r, i, j, best
    cdef double dot, h, y, t, hmax
    counts_a = np.zeros(k, dtype=np.int64)
    cell_sum_a = np.zeros(k)
    cell_sq_a = np.zeros(k)
    cell_comp_a = np.zeros(k)
    resultant_a = np.zeros((k, d))
    cdef long long[::1] counts = counts_a
    cdef double[::1] cell_sum = cell_sum_a
    cdef double[::1] cell_sq = cell_sq_a
    cdef double[::1] cell_comp = cell_comp_a
    cdef double[:, ::1] resultant = resultant_a
    cdef double total = 0.0, total_comp = 0.0, total_sq = 0.0
    if d != v.shape[1]:
        raise ValueError("dimension mismatch between samples and vertices")
    for r in range(m):
        best = 0
        hmax = 0.0
        for j in range(d):
            hmax += x[r, j] * v[0, j]
        for i in range(1, k):
            dot = 0.0
            for j in range(d):
                dot += x[r, j] * v[i, j]
            if dot > hmax:
                hmax = dot
                best = i
        h = hmax
        counts[best] += 1
        # Neumaier summation for the totals and the per-cell sums.
        t = total + h
        if fabs(total) >= fabs(h):
            total_comp += (total - t) + h
        else:
            total_comp += (h - t) + total
        total = t
        total_sq += h * h
        y = cell_sum[best]
        t = y + h
        if fabs(y) >= fabs(h):
            cell_comp[best] += (y - t) + h
        else:
            cell_comp[best] += (h - t) + y
        cell_sum[best] = t
        cell_sq[best] += h * h
        for j in range(d):
            resultant[best, j] += x[r, j]
    for i in range(k):
        cell_sum[i] += cell_comp[i]
    return counts_a, cell_sum_a, cell_sq_a, resultant_a, total + total_comp, total_sq


def circle_envelope(const double[::1] f_pow, const double[::1] g_pow, const double[::1] weight,
                    const long long[::1] offset):
    """Sup-convolution on the uniform circle grid.

    ``f_pow = f**(1-lam)``, ``g_pow = g**lam``; ``weight[a]`` and ``offset[a]``
    are tabulated for the signed node separation ``a - N//2`` (``a`` in
    ``0..N-1``).  Node ``i`` paired with node ``i + delta`` lands on node
    ``i + offset``.  A zero weight marks an excluded (antipodal) separation.
    """
    cdef Py_ssize_t n = f_pow.shape[0]
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t i, a, j, kk
    cdef long long delta
    cdef double fi, val, w
    h_a = np.zeros(n)
    cdef double[::1] h = h_a
    for i in range(n):
        fi = f_pow[i]
        if fi == 0.0:
            continue
        for a in range(n):
            w = weight[a]
            if w == 0.0:
                continue
            delta = a - half
            # |delta| and |offset| are at most n/2, so one wrap suffices
            j = i + delta
            if j < 0:
                j += n
            elif j >= n:
                j -= n
            val = fi * g_pow[j] * w
            kk = i + offset[a]
            if kk < 0:
                kk += n
            elif kk >= n:
                kk -= n
            if val > h[kk]:
                h[kk] = val
    return h_a
