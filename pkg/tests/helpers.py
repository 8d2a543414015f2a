"""Shared generators for the test modules."""
import numpy as np

from oudesign import CovParams, DesignSpace, GridDesign, MonotonicChain

TABLE1_SPACE = DesignSpace(223.0, 420.0, 0.84, 43.51)
TABLE1_PARAMS = ((0.001, 0.01), (0.1, 1.0), (1.0, 1.0), (1.0, 10.0))


def random_grid(rng, n, m, scale=1.0, origin=(0.0, 0.0)):
    s = origin[0] + np.cumsum(np.r_[0.0, rng.uniform(0.05, 1.0, n - 1)]) * scale
    t = origin[1] + np.cumsum(np.r_[0.0, rng.uniform(0.05, 1.0, m - 1)]) * scale
    return GridDesign(s, t)


def random_chain(rng, k):
    inc = rng.uniform(0.0, 1.0, (k - 1, 2))
    inc[:, 0] += 0.01
    return MonotonicChain(np.vstack([[0.0, 0.0], np.cumsum(inc, axis=0)]))


def random_params(rng, lo=0.05, hi=5.0, sigma=1.0):
    a, b = rng.uniform(lo, hi, 2)
    return CovParams(float(a), float(b), sigma)
