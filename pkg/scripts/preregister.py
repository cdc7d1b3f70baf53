"""High-n reference runs for the strip-ratio and centroid-slope experiments.

Written against plain numpy with its own sampler (PCG64), cone test and
shear so it shares no code with the package.  Results go to
tests/data/preregistered.json and are compared against package runs by the
acceptance tests.

    python3 scripts/preregister.py [--n 100000000] [--chunk 1000000]
"""

import argparse
import json
import time
from pathlib import Path

import numpy as np

DOCUMENTED_TRIANGLE = [[1.0, -0.3, -0.4], [1.0, 0.6, -0.3], [1.0, 0.1, 0.5]]
SYMMETRIC_TRIANGLE = [[1.0, 0.0, 0.5], [1.0, 0.5, -0.3], [1.0, -0.5, -0.3]]
COMMON_VERTEX_SIMPLEX = [
    [0.0, 0.3, 1.0, 0.0],
    [0.0, 0.3, -0.5, 0.8660254037844386],
    [0.0, 0.3, -0.5, -0.8660254037844386],
    [1.0, 0.2, 0.1, 0.0],
]

STRIP_RUNS = [
    {"name": "documented", "generators": DOCUMENTED_TRIANGLE, "s": 0.1, "t1": 0.2, "t2": 0.25},
    {"name": "symmetric", "generators": SYMMETRIC_TRIANGLE, "s": 0.1, "t1": -0.04, "t2": 0.04},
]
CENTROID_RUN = {"name": "common-vertex", "generators": COMMON_VERTEX_SIMPLEX, "s_values": [0.0, 0.05, 0.1, 0.2]}


def in_cone(gens, y):
    # y = c @ gens with c >= 0; solve for c directly
    c = np.linalg.solve(gens.T, y.T).T
    return np.all(c >= -1e-12, axis=1)


def in_sheared(gens, x, s):
    # x in f_s(cone) iff the preimage under x2 -> x2 + s x1 is in the cone
    y = x.copy()
    y[:, 1] -= s * x[:, 0]
    return in_cone(gens, y)


def slope_in(x, lo, hi):
    x1 = x[:, 0]
    ok = x1 > 1e-12
    t = np.divide(x[:, 1], x1, out=np.zeros_like(x1), where=ok)
    return ok & (t >= lo) & (t < hi)


class Moments:
    def __init__(self, k):
        self.n = 0
        self.s1 = np.zeros(k)
        self.s2 = np.zeros((k, k))

    def add(self, z):
        self.n += len(z)
        self.s1 += z.sum(axis=0)
        self.s2 += z.T @ z

    @property
    def mean(self):
        return self.s1 / self.n

    @property
    def cov(self):
        m = self.mean
        return self.s2 / self.n - np.outer(m, m)

    def se(self, grad):
        return float(np.sqrt(max(grad @ self.cov @ grad, 0.0) / self.n))


def ratio(m, num, den):
    mu = m.mean
    r = mu[num] / mu[den]
    g = np.zeros(len(mu))
    g[num] = 1.0 / mu[den]
    g[den] = -mu[num] / mu[den] ** 2
    return float(r), g


def strip_run(cfg, n, chunk, rng):
    gens = np.array(cfg["generators"], dtype=float)
    gens /= np.linalg.norm(gens, axis=1, keepdims=True)
    s, t1, t2 = cfg["s"], cfg["t1"], cfg["t2"]
    m = Moments(4)
    for _ in range(n // chunk):
        x = rng.standard_normal((chunk, 3))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        src, img = in_cone(gens, x), in_sheared(gens, x, s)
        lo, up = slope_in(x, t1 - s, t2 - s), slope_in(x, t1, t2)
        z = np.stack([img & lo, src & lo, img & up, src & up], axis=1) * x[:, :1]
        m.add(z)
    r_lo, g_lo = ratio(m, 0, 1)
    r_up, g_up = ratio(m, 2, 3)
    return {
        **cfg,
        "n": m.n,
        "integrals": dict(zip(["T_lower", "S_lower", "T_upper", "S_upper"], m.mean.tolist())),
        "ratios": {"lower": r_lo, "upper": r_up},
        "std_errors": {"ratio_lower": m.se(g_lo), "ratio_upper": m.se(g_up)},
        "difference": r_up - r_lo,
        "difference_se": m.se(g_up - g_lo),
    }


def centroid_run(cfg, n, chunk, rng):
    gens = np.array(cfg["generators"], dtype=float)
    gens /= np.linalg.norm(gens, axis=1, keepdims=True)
    svals = cfg["s_values"]
    m = Moments(2 * len(svals))
    for _ in range(n // chunk):
        x = rng.standard_normal((chunk, 4))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        cols = []
        for s in svals:
            inside = in_sheared(gens, x, s)
            cols += [inside * x[:, 0], inside * x[:, 1]]
        m.add(np.stack(cols, axis=1))
    slopes, ses, grads = [], [], []
    for k in range(len(svals)):
        r, g = ratio(m, 2 * k + 1, 2 * k)
        slopes.append(r)
        ses.append(m.se(g))
        grads.append(g)
    return {
        **cfg,
        "n": m.n,
        "slopes": slopes,
        "slope_std_errors": ses,
        "differences": [slopes[k + 1] - slopes[k] for k in range(len(svals) - 1)],
        "difference_std_errors": [m.se(grads[k + 1] - grads[k]) for k in range(len(svals) - 1)],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10**8)
    ap.add_argument("--chunk", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=20240917)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/data/preregistered.json"))
    a = ap.parse_args()
    rng = np.random.Generator(np.random.PCG64(a.seed))
    t0 = time.time()
    result = {
        "generator": "numpy PCG64",
        "seed": a.seed,
        "strip_ratio": [strip_run(c, a.n, a.chunk, rng) for c in STRIP_RUNS],
        "centroid_uniqueness": [centroid_run(CENTROID_RUN, a.n, a.chunk, rng)],
    }
    result["seconds"] = round(time.time() - t0, 1)
    Path(a.out).write_text(json.dumps(result, indent=2) + "\n")
    print(json.dumps(result, indent=2))


if __name__ == "__main__":
    main()
