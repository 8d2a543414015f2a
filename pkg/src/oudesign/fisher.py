"""Closed-form Fisher information for grid designs on the OU sheet.

Everything here works on the one-dimensional spacings only; the Kronecker
structure of the covariance splits every criterion into an ``s``-direction
factor and a ``t``-direction factor. Information on the trend is computed
for the correlation matrix (``sigma`` is a nuisance parameter and cancels).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covariance import chain_factor
from .design import CovParams, GridDesign, MonotonicChain
from .errors import DomainError

__all__ = [
    "FisherR", "FisherTrend2", "trend_factor", "m_theta", "m_theta_monotonic",
    "m_r", "det_m_r_equidistant", "det_m_all", "det_m_all_free_equidistant",
    "arrhenius_kappa", "arrhenius_lambda", "m_B_arrhenius", "m_muB_arrhenius",
    "det_frak_m",
]

_fsum = math.fsum


@dataclass(frozen=True)
class FisherR:
    """Information matrix on the decay rates ``(alpha, beta)``."""

    m_alpha: float
    m_beta: float
    m_alphabeta: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m_alpha, self.m_alphabeta],
                         [self.m_alphabeta, self.m_beta]])

    @property
    def det(self) -> float:
        return self.m_alpha * self.m_beta - self.m_alphabeta ** 2


@dataclass(frozen=True)
class FisherTrend2:
    """Information matrix on the Arrhenius parameters ``(mu, B)``."""

    m_mumu: float
    m_muB: float
    m_BB: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m_mumu, self.m_muB], [self.m_muB, self.m_BB]])

    @property
    def det(self) -> float:
        return self.m_mumu * self.m_BB - self.m_muB ** 2


def trend_factor(lags) -> float:
    """``1 + sum((1 - p)/(1 + p))`` for ``p = exp(-lags)``.

    This is ``1' P^{-1} 1`` for a single direction; ``(1-p)/(1+p)`` is
    evaluated as ``tanh(lag/2)``.
    """
    return 1.0 + _fsum(np.tanh(0.5 * np.asarray(lags, dtype=float)))


def m_theta(grid: GridDesign, params: CovParams) -> float:
    """Information on a constant trend ``theta``."""
    return (trend_factor(params.alpha * np.diff(grid.s))
            * trend_factor(params.beta * np.diff(grid.t)))


def m_theta_monotonic(chain: MonotonicChain, params: CovParams) -> float:
    return trend_factor(chain_factor(chain, params).x)


# -- covariance-parameter information ---------------------------------------

def _decay_terms(d, rate):
    """Per-link pieces ``(d^2 p^2 (1+p^2)/(1-p^2)^2, d p^2/(1-p^2))``."""
    d = np.asarray(d, dtype=float)
    x = rate * d
    p2 = np.exp(-2.0 * x)
    om = -np.expm1(-2.0 * x)
    ratio = p2 / om
    return d * d * ratio * (1.0 + p2) / om, d * ratio


def _m_single(d, rate):
    """Information on one decay rate from a 1-D OU process with spacings d."""
    sq, _ = _decay_terms(d, rate)
    return _fsum(sq)


def m_r(grid: GridDesign, params: CovParams) -> FisherR:
    d = np.diff(grid.s)
    delta = np.diff(grid.t)
    sq_a, lin_a = _decay_terms(d, params.alpha)
    sq_b, lin_b = _decay_terms(delta, params.beta)
    return FisherR(grid.m * _fsum(sq_a), grid.n * _fsum(sq_b),
                   2.0 * _fsum(lin_a) * _fsum(lin_b))


def _check_free(n, m, d, delta):
    if n < 2 or m < 2:
        raise DomainError(f"need n, m >= 2, got {n}, {m}")
    if np.any(np.asarray(d) <= 0) or np.any(np.asarray(delta) <= 0):
        raise DomainError("spacings must be positive")


def det_m_r_equidistant(n, m, d, delta, params: CovParams):
    """``det M_r`` of the ``n x m`` grid with constant spacings ``d, delta``.

    Written in terms of ``p = exp(-alpha d)`` and ``q = exp(-beta delta)``
    (numerator and denominator of the exponential form multiplied by
    ``p^4 q^4``) so that large spacings do not overflow. Vectorized over
    ``d`` and ``delta``.
    """
    _check_free(n, m, d, delta)
    d = np.asarray(d, dtype=float)
    delta = np.asarray(delta, dtype=float)
    p2 = np.exp(-2.0 * params.alpha * d)
    q2 = np.exp(-2.0 * params.beta * delta)
    omp = -np.expm1(-2.0 * params.alpha * d)
    omq = -np.expm1(-2.0 * params.beta * delta)
    out = ((n - 1) * (m - 1) * d ** 2 * delta ** 2 * p2 * q2 / (omp * omq) ** 2
           * (n * m * (1 + p2) * (1 + q2) - 4 * (n - 1) * (m - 1) * p2 * q2))
    return float(out) if out.ndim == 0 else out


def det_m_all(grid: GridDesign, params: CovParams) -> float:
    """``det M = M_theta * det M_r`` (the information matrix is block diagonal)."""
    return m_theta(grid, params) * m_r(grid, params).det


def det_m_all_free_equidistant(n, m, d, delta, params: CovParams):
    """``M_theta * det M_r`` for constant spacings, in overflow-free form."""
    _check_free(n, m, d, delta)
    d = np.asarray(d, dtype=float)
    delta = np.asarray(delta, dtype=float)
    p = np.exp(-params.alpha * d)
    q = np.exp(-params.beta * delta)
    # n (e^{x} - 1) + 2 over e^{x} + 1, i.e. the trend factor of n equal links
    tf_s = (n * (1 - p) + 2 * p) / (1 + p)
    tf_t = (m * (1 - q) + 2 * q) / (1 + q)
    return tf_s * tf_t * det_m_r_equidistant(n, m, d, delta, params)


# -- Arrhenius trend ------------------------------------------------------

def _check_temperatures(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("temperatures must be nonnegative")
    return t


def arrhenius_kappa(t, mu, B) -> np.ndarray:
    """``d eta / d B = -exp(-B/t) / t**(mu+1)``, set to 0 at ``t = 0``."""
    t = _check_temperatures(t)
    out = np.zeros_like(t)
    pos = t > 0
    tp = t[pos]
    out[pos] = -np.exp(-B / tp) * tp ** (-(mu + 1.0))
    return out


def arrhenius_lambda(t, mu, B) -> np.ndarray:
    """``d eta / d mu = -log(t) exp(-B/t) / t**mu``, set to 0 at ``t = 0``."""
    t = _check_temperatures(t)
    out = np.zeros_like(t)
    pos = t > 0
    tp = t[pos]
    out[pos] = -np.log(tp) * np.exp(-B / tp) * tp ** (-mu)
    return out


def _markov_form(u, v, q, one_minus_q2) -> float:
    """``u' Q^{-1} v`` for the tridiagonal inverse of a 1-D factor."""
    return u[-1] * v[-1] + _fsum(
        (u[:-1] - u[1:] * q) * (v[:-1] - v[1:] * q) / one_minus_q2)


def _t_factor(grid, params):
    x = params.beta * np.diff(grid.t)
    return np.exp(-x), -np.expm1(-2.0 * x)


def m_B_arrhenius(grid: GridDesign, params: CovParams, mu, B) -> float:
    """Information on ``B`` with ``mu`` known."""
    kappa = arrhenius_kappa(grid.t, mu, B)
    q, omq = _t_factor(grid, params)
    return float(trend_factor(params.alpha * np.diff(grid.s))
                 * _markov_form(kappa, kappa, q, omq))


def m_muB_arrhenius(grid: GridDesign, params: CovParams, mu, B) -> FisherTrend2:
    kappa = arrhenius_kappa(grid.t, mu, B)
    lam = arrhenius_lambda(grid.t, mu, B)
    q, omq = _t_factor(grid, params)
    scale = trend_factor(params.alpha * np.diff(grid.s))
    return FisherTrend2(float(scale * _markov_form(lam, lam, q, omq)),
                        float(scale * _markov_form(lam, kappa, q, omq)),
                        float(scale * _markov_form(kappa, kappa, q, omq)))


def det_frak_m(grid: GridDesign, params: CovParams, mu, B,
               mu_known: bool = False) -> float:
    """D-criterion on trend and covariance parameters of the Arrhenius model.

    With ``mu_known`` the trend block is the scalar ``M_B``; otherwise it is
    the 2x2 matrix on ``(mu, B)``.
    """
    if mu_known:
        trend = m_B_arrhenius(grid, params, mu, B)
    else:
        trend = m_muB_arrhenius(grid, params, mu, B).det
    return float(trend * m_r(grid, params).det)
