"""Kriging MSPE, IMSPE and entropy criteria for grid designs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covariance import chain_factor, correlation_factors, factor_log_det
from .design import CovParams, GridDesign, MonotonicChain
from .errors import ExtrapolationError
from .fisher import trend_factor

__all__ = [
    "PredictionPoint", "mspe", "imspe", "imspe_terms", "entropy",
    "entropy_monotonic", "normalize",
]

_fsum = math.fsum
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class PredictionPoint:
    x1: float
    x2: float


def _kriging_direction(x, nodes, rate):
    """One-direction pieces of the MSPE for prediction abscissas ``x``.

    Returns ``(R' P^{-1} R, R' P^{-1} 1)`` for the correlation vector
    ``R = exp(-rate |x - nodes|)``; ``x`` may be an array.
    """
    x = np.asarray(x, dtype=float)[..., None]
    rho = np.exp(-rate * np.abs(x - nodes))
    lag = rate * np.diff(nodes)
    p = np.exp(-lag)
    omp2 = -np.expm1(-2.0 * lag)
    resid = rho[..., :-1] - rho[..., 1:] * p
    quad = rho[..., -1] ** 2 + np.sum(resid ** 2 / omp2, axis=-1)
    lin = rho[..., -1] + np.sum(resid / (1.0 + p), axis=-1)
    return quad, lin


def mspe(x, grid: GridDesign, params: CovParams):
    """Mean squared prediction error of the kriging predictor at ``x``.

    ``x`` is a :class:`PredictionPoint`, a pair, or a pair of broadcastable
    arrays. Prediction outside ``[s_1, s_n] x [t_1, t_m]`` is refused.
    """
    if isinstance(x, PredictionPoint):
        x1, x2 = x.x1, x.x2
    else:
        x1, x2 = x
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if (np.any(x1 < grid.s[0]) or np.any(x1 > grid.s[-1])
            or np.any(x2 < grid.t[0]) or np.any(x2 > grid.t[-1])):
        raise ExtrapolationError("prediction point outside the grid hull")
    qs, ls = _kriging_direction(x1, grid.s, params.alpha)
    qt, lt = _kriging_direction(x2, grid.t, params.beta)
    mt = (trend_factor(params.alpha * np.diff(grid.s))
          * trend_factor(params.beta * np.diff(grid.t)))
    out = params.sigma ** 2 * (1.0 - qs * qt + (1.0 - ls * lt) ** 2 / mt)
    # rounding can leave -1e-17 at design points
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def normalize(grid: GridDesign, params: CovParams):
    """Map the grid hull affinely onto ``[0, 1]^2``.

    Decay rates are rescaled with the axis lengths so that every
    correlation is unchanged. Returns ``(grid01, params01)``.
    """
    ls = grid.s[-1] - grid.s[0]
    lt = grid.t[-1] - grid.t[0]
    g = GridDesign((grid.s - grid.s[0]) / ls, (grid.t - grid.t[0]) / lt)
    return g, CovParams(params.alpha * ls, params.beta * lt, params.sigma)


def imspe_terms(d, rate):
    """One-direction integrals ``(A, B, D)`` for spacings ``d`` on [0, 1].

    ``A = tr(P^{-1} int R R')``, ``B = 1' P^{-1} int R`` and
    ``D = 1' P^{-1} (int R R') P^{-1} 1``.
    """
    d = np.asarray(d, dtype=float)
    x = rate * d
    p = np.exp(-x)
    a = (d.size / rate) - 2.0 * _fsum(d * np.exp(-2.0 * x) / -np.expm1(-2.0 * x))
    b = (2.0 / rate) * _fsum(np.tanh(0.5 * x))
    dd = _fsum((-np.expm1(-2.0 * x) + 2.0 * x * p) / (rate * (1.0 + p) ** 2))
    return a, b, dd


def imspe(grid: GridDesign, params: CovParams) -> float:
    """Integrated MSPE over the grid hull, normalized to the unit square.

    The value is ``sigma^-2`` times the average MSPE, i.e. dimensionless.
    """
    g, pr = normalize(grid, params)
    d = np.diff(g.s)
    delta = np.diff(g.t)
    a1, b1, d1 = imspe_terms(d, pr.alpha)
    a2, b2, d2 = imspe_terms(delta, pr.beta)
    mt = (trend_factor(pr.alpha * d) * trend_factor(pr.beta * delta))
    return 1.0 - a1 * a2 + (1.0 - 2.0 * b1 * b2 + d1 * d2) / mt


def entropy(grid: GridDesign, params: CovParams) -> float:
    """Differential entropy of the observation vector on the grid."""
    P, Q = correlation_factors(grid, params)
    n, m = grid.n, grid.m
    return (0.5 * n * m * (1.0 + _LOG_2PI + 2.0 * math.log(params.sigma))
            + 0.5 * m * factor_log_det(P) + 0.5 * n * factor_log_det(Q))


def entropy_monotonic(chain: MonotonicChain, params: CovParams) -> float:
    f = chain_factor(chain, params)
    return (0.5 * chain.k * (1.0 + _LOG_2PI + 2.0 * math.log(params.sigma))
            + 0.5 * factor_log_det(f))
