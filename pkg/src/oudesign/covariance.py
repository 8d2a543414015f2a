"""Separable exponential covariance of the OU sheet.

On a grid (lexicographic order) the correlation matrix is ``P kron Q`` where
``P`` and ``Q`` are correlation matrices of one-dimensional OU processes.
Each factor is determined by its neighbour correlations ``p_i``; its inverse
is tridiagonal and its determinant is ``prod(1 - p_i**2)``.
"""
from __future__ import annotations

import math

import numpy as np

from .design import CovParams, GridDesign, MonotonicChain
from .errors import DomainError, SingularityError

__all__ = [
    "CorrelationFactor", "correlation_factors", "chain_factor",
    "factor_inverse", "factor_log_det", "dense_covariance",
    "covariance_derivatives", "semivariogram",
]


class CorrelationFactor:
    """Correlation matrix of a Markov sequence with neighbour correlations p.

    Stored through the decay exponents ``x_i = -log(p_i)`` so that
    ``1 - p_i**2`` can be formed without cancellation when ``p_i`` is close
    to 1. ``x_i = inf`` means ``p_i = 0`` (independent neighbours).
    """

    __slots__ = ("x",)

    def __init__(self, x):
        x = np.array(x, dtype=float).reshape(-1)
        if np.any(np.isnan(x)) or np.any(x < 0):
            raise DomainError("decay exponents must be nonnegative")
        # p would round to 1: coincident points
        if np.any(np.exp(-x) >= 1.0):
            raise SingularityError(
                "neighbour correlation rounds to 1 (coincident design points)")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    def __setattr__(self, name, value):
        raise AttributeError("CorrelationFactor is immutable")

    @classmethod
    def from_correlations(cls, p) -> "CorrelationFactor":
        p = np.asarray(p, dtype=float).reshape(-1)
        if np.any(p < 0) or np.any(p >= 1):
            if np.any(p >= 1):
                raise SingularityError("neighbour correlation must be < 1")
            raise DomainError("neighbour correlations must lie in [0, 1)")
        with np.errstate(divide="ignore"):
            return cls(-np.log(p))

    @property
    def p(self) -> np.ndarray:
        return np.exp(-self.x)

    @property
    def one_minus_p2(self) -> np.ndarray:
        return -np.expm1(-2.0 * self.x)

    @property
    def size(self) -> int:
        return self.x.size + 1

    def dense(self) -> np.ndarray:
        """Entry ``(i, j)`` is ``p_i p_{i+1} ... p_{j-1}`` for ``i < j``."""
        k = self.size
        cum = np.concatenate([[0.0], np.cumsum(self.x)])
        with np.errstate(invalid="ignore"):
            lag = np.abs(cum[:, None] - cum[None, :])
        # inf - inf only arises off-diagonal across an independent link
        lag[np.isnan(lag)] = np.inf
        out = np.exp(-lag)
        out[np.diag_indices(k)] = 1.0
        return out


def correlation_factors(design: GridDesign, params: CovParams):
    """``(P, Q)`` with ``p_i = exp(-alpha d_i)`` and ``q_j = exp(-beta delta_j)``."""
    return (CorrelationFactor(params.alpha * np.diff(design.s)),
            CorrelationFactor(params.beta * np.diff(design.t)))


def chain_factor(chain: MonotonicChain, params: CovParams) -> CorrelationFactor:
    """Markov factor along a monotonic chain: ``p_i = exp(-alpha ds_i - beta dt_i)``."""
    ds, dt = chain.increments()
    return CorrelationFactor(params.alpha * ds + params.beta * dt)


def factor_inverse(factor: CorrelationFactor) -> np.ndarray:
    """Tridiagonal inverse of the dense factor."""
    k = factor.size
    if k == 1:
        return np.ones((1, 1))
    p = factor.p
    w = 1.0 / factor.one_minus_p2          # 1/(1-p_i^2)
    off = -p * w                           # p_i/(p_i^2-1)
    diag = np.empty(k)
    diag[0] = w[0]
    diag[-1] = w[-1]
    # V_k = 1/(1-p_k^2) + p_{k-1}^2/(1-p_{k-1}^2)
    diag[1:-1] = w[1:] + p[:-1] ** 2 * w[:-1]
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def factor_log_det(factor: CorrelationFactor) -> float:
    """``sum(log(1 - p_i**2))``."""
    return math.fsum(np.log(factor.one_minus_p2))


def _pairwise_lags(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must have shape (N, 2)")
    ds = np.abs(pts[:, 0, None] - pts[None, :, 0])
    dt = np.abs(pts[:, 1, None] - pts[None, :, 1])
    return ds, dt


def dense_covariance(points, params: CovParams) -> np.ndarray:
    """``sigma^2 exp(-alpha |s_i - s_j| - beta |t_i - t_j|)`` for all pairs."""
    ds, dt = _pairwise_lags(points)
    same = (ds == 0) & (dt == 0)
    if np.count_nonzero(same) > same.shape[0]:
        raise SingularityError("duplicate observation points")
    return params.sigma ** 2 * np.exp(-params.alpha * ds - params.beta * dt)


def covariance_derivatives(points, params: CovParams):
    """Elementwise ``dC/dalpha`` and ``dC/dbeta``."""
    ds, dt = _pairwise_lags(points)
    cov = params.sigma ** 2 * np.exp(-params.alpha * ds - params.beta * dt)
    return -ds * cov, -dt * cov


def semivariogram(d, delta, params: CovParams):
    """Half the variance of the increment over lag ``(d, delta)``."""
    d = np.asarray(d, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if np.any(d < 0) or np.any(delta < 0):
        raise DomainError("lags must be nonnegative")
    a, b = params.alpha, params.beta
    sill = params.sigma_tilde ** 2 / (4.0 * a * b)
    out = -sill * np.expm1(-a * d - b * delta)
    return float(out) if out.ndim == 0 else out
