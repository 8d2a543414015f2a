"""Dense linear-algebra reference implementations of every criterion.

Nothing here uses the closed forms of :mod:`fisher` or :mod:`prediction`:
each quantity is computed from the dense covariance by Cholesky or LU
factorization and triangular solves. Matrices are never inverted
explicitly. Intended for validation and for arbitrary point sets of modest
size (a few hundred points).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, linalg

from .covariance import dense_covariance
from .design import CovParams
from .errors import AccuracyError, FactorizationError, SingularityError
from .fisher import FisherR

__all__ = [
    "CholeskyFactor", "IllConditionedWarning", "COND_LIMIT", "cholesky",
    "condition_number", "tolerance_for", "one_c_inv_one", "fisher_trace",
    "fisher_trend_general", "mspe_bordered", "imspe_quadrature",
    "entropy_dense", "arrhenius_gradient",
]

COND_LIMIT = 1e12
RELAXED_RTOL = 1e-6


class IllConditionedWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class CholeskyFactor:
    lower: np.ndarray

    def solve(self, b):
        y = linalg.solve_triangular(self.lower, b, lower=True)
        return linalg.solve_triangular(self.lower.T, y, lower=False)

    def half_solve(self, b):
        """``L^{-1} b``; quadratic forms are ``||L^{-1} b||^2``."""
        return linalg.solve_triangular(self.lower, b, lower=True)

    def log_det(self) -> float:
        return 2.0 * math.fsum(np.log(np.diag(self.lower)))


def condition_number(C) -> float:
    return float(np.linalg.cond(np.asarray(C)))


def tolerance_for(C, rtol=1e-9) -> float:
    """Relative tolerance to use when comparing against the oracle on ``C``."""
    return RELAXED_RTOL if condition_number(C) > COND_LIMIT else rtol


def cholesky(C) -> CholeskyFactor:
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise FactorizationError("covariance must be square")
    if not np.allclose(C, C.T, rtol=0, atol=1e-14 * np.abs(C).max()):
        raise FactorizationError("covariance is not symmetric")
    try:
        lower = linalg.cholesky(C, lower=True)
    except linalg.LinAlgError as exc:
        raise FactorizationError(f"covariance is not positive definite: {exc}")
    if condition_number(C) > COND_LIMIT:
        warnings.warn("covariance condition number exceeds "
                      f"{COND_LIMIT:.0e}; compare at rtol {RELAXED_RTOL}",
                      IllConditionedWarning, stacklevel=2)
    return CholeskyFactor(lower)


def one_c_inv_one(C) -> float:
    """``1' C^{-1} 1``."""
    L = cholesky(C)
    z = L.half_solve(np.ones(L.lower.shape[0]))
    return float(z @ z)


def fisher_trace(C, dC_alpha, dC_beta) -> FisherR:
    """Half traces ``tr(C^{-1} dC_a C^{-1} dC_b) / 2`` for the decay rates."""
    L = cholesky(C)
    xa = L.solve(dC_alpha)
    xb = L.solve(dC_beta)
    # tr(XY) = sum(X * Y^T)
    return FisherR(0.5 * float(np.sum(xa * xa.T)),
                   0.5 * float(np.sum(xb * xb.T)),
                   0.5 * float(np.sum(xa * xb.T)))


def fisher_trend_general(F, C) -> np.ndarray:
    """``F' C^{-1} F`` for a trend-derivative matrix ``F`` of shape (N, k)."""
    F = np.asarray(F, dtype=float)
    if F.ndim == 1:
        F = F[:, None]
    L = cholesky(C)
    Z = L.half_solve(F)
    return Z.T @ Z


def arrhenius_gradient(t, mu, B) -> np.ndarray:
    """Columns ``(d eta/d mu, d eta/d B)`` of ``eta = t**-mu exp(-B/t)``.

    Complex-step differentiation of the trend itself, so it shares nothing
    with the analytic derivatives used by the closed forms. Rows with
    ``t = 0`` are zero by convention.
    """
    t = np.asarray(t, dtype=float)
    h = 1e-30
    out = np.zeros((t.size, 2))
    pos = t > 0
    tp = t[pos].astype(complex)
    eta = lambda mu_, B_: tp ** (-mu_) * np.exp(-B_ / tp)
    out[pos, 0] = eta(mu + 1j * h, B).imag / h
    out[pos, 1] = eta(mu, B + 1j * h).imag / h
    return out


class _BorderedKriging:
    """LU-factored bordered system ``[[0, 1'], [1, C]]`` for repeated MSPE."""

    def __init__(self, points, params: CovParams):
        self.points = np.asarray(points, dtype=float)
        self.params = params
        N = self.points.shape[0]
        C = dense_covariance(self.points, CovParams(params.alpha, params.beta))
        K = np.zeros((N + 1, N + 1))
        K[0, 1:] = 1.0
        K[1:, 0] = 1.0
        K[1:, 1:] = C
        with warnings.catch_warnings():
            warnings.simplefilter("error", linalg.LinAlgWarning)
            try:
                self.lu = linalg.lu_factor(K)
            except (linalg.LinAlgError, linalg.LinAlgWarning) as exc:
                raise SingularityError(f"bordered kriging system: {exc}")
        if np.any(np.diag(self.lu[0]) == 0):
            raise SingularityError("bordered kriging system is singular")

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        a, b = self.params.alpha, self.params.beta
        R = np.exp(-a * np.abs(x[:, 0, None] - self.points[None, :, 0])
                   - b * np.abs(x[:, 1, None] - self.points[None, :, 1]))
        v = np.hstack([np.ones((x.shape[0], 1)), R]).T
        w = linalg.lu_solve(self.lu, v)
        return self.params.sigma ** 2 * (1.0 - np.sum(v * w, axis=0))


def mspe_bordered(x, points, params: CovParams):
    """MSPE at ``x`` (a pair or an (k, 2) array) from the bordered system."""
    vals = _BorderedKriging(points, params)(x)
    return float(vals[0]) if np.ndim(x) == 1 else vals


def imspe_quadrature(points, params: CovParams, tol=1e-8, region=None,
                     limit=200):
    """Average of ``MSPE / sigma^2`` over ``region`` by nested adaptive quadrature.

    ``region`` is ``(a1, b1, a2, b2)`` and defaults to the bounding box of
    the points. Each axis is split at the design coordinates, where the
    integrand has kinks. Raises :class:`AccuracyError` (with the estimate
    attached) when QUADPACK reports that ``tol`` was not reached.
    """
    pts = np.asarray(points, dtype=float)
    if region is None:
        region = (pts[:, 0].min(), pts[:, 0].max(),
                  pts[:, 1].min(), pts[:, 1].max())
    a1, b1, a2, b2 = region
    area = (b1 - a1) * (b2 - a2)
    krig = _BorderedKriging(pts, CovParams(params.alpha, params.beta))
    brk1 = np.unique(pts[:, 0][(pts[:, 0] > a1) & (pts[:, 0] < b1)])
    brk2 = np.unique(pts[:, 1][(pts[:, 1] > a2) & (pts[:, 1] < b2)])
    # an absolute error of tol on the average means tol*area on the integral
    eps = tol * area
    errors = []

    def inner(x1):
        val, err = _quad_pieces(lambda x2: krig(np.array([x1, x2]))[0],
                                a2, b2, brk2, eps / (b1 - a1) / 4, limit)
        errors.append(err)
        return val

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            total, err = _quad_pieces(inner, a1, b1, brk1, eps / 2, limit)
        except integrate.IntegrationWarning as exc:
            raise AccuracyError(str(exc), estimate=float("nan"),
                                error=float("inf"))
    total_err = err + (b1 - a1) * max(errors, default=0.0)
    estimate = total / area
    if total_err > eps:
        raise AccuracyError("quadrature error estimate exceeds tolerance",
                            estimate=estimate, error=total_err / area)
    return estimate


def _quad_pieces(f, lo, hi, breaks, epsabs, limit):
    edges = np.concatenate([[lo], breaks, [hi]])
    per = epsabs / (edges.size - 1)
    total = []
    err = []
    for u, v in zip(edges[:-1], edges[1:]):
        val, e = integrate.quad(f, u, v, epsabs=per, epsrel=0.0, limit=limit)
        total.append(val)
        err.append(e)
    return math.fsum(total), math.fsum(err)


def entropy_dense(points, params: CovParams, sigma=None) -> float:
    """Gaussian entropy of observations at ``points``.

    ``sigma`` overrides ``params.sigma`` when given.
    """
    sigma = params.sigma if sigma is None else sigma
    pts = np.asarray(points, dtype=float)
    C = dense_covariance(pts, CovParams(params.alpha, params.beta))
    N = pts.shape[0]
    return (0.5 * N * (1.0 + math.log(2.0 * math.pi * sigma ** 2))
            + 0.5 * cholesky(C).log_det())
