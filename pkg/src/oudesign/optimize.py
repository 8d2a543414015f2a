"""Design optimizers and root solvers for the optimality results.

Grid designs: the directionally equidistant grid is optimal for the trend
D-criterion, IMSPE and entropy, so :func:`optimal_grid` returns it without
iteration. Free-boundary equidistant designs for all parameters are found by
solving the stationarity system. Two-point Arrhenius designs reduce to scalar
root problems. Monotonic chains are optimized numerically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize as sopt

from . import fisher
from .design import (CovParams, DesignSpace, GridDesign, MonotonicChain,
                     make_equidistant_grid)
from .errors import DomainError, NoSolutionError
from .prediction import entropy_monotonic

__all__ = [
    "GRID_CRITERIA", "CHAIN_CRITERIA", "optimal_grid", "g1", "g2",
    "free_boundary_equations", "FreeBoundarySolution", "solve_all_params_free",
    "DesignClass", "covariance_design_classification", "maximin_two_point",
    "maximin_equation", "joint_two_point_delta", "joint_two_point_u",
    "OptimizationReport", "optimize_monotonic_chain", "SURFACE_OBJECTIVES",
    "surface_scan", "find_roots",
]

GRID_CRITERIA = ("trend-D", "imspe", "entropy")
CHAIN_CRITERIA = ("trend-D", "entropy")

# geometric probe grid used to bracket roots
SCAN_LO, SCAN_HI, SCAN_POINTS = 1e-6, 50.0, 200


def optimal_grid(space: DesignSpace, n: int, m: int,
                 criterion: str = "trend-D") -> GridDesign:
    """Optimal ``n x m`` grid on ``space`` for ``criterion``.

    For every supported criterion the optimum with fixed endpoints is the
    directionally equidistant grid.
    """
    if criterion not in GRID_CRITERIA:
        raise ValueError(f"unknown grid criterion {criterion!r}")
    return make_equidistant_grid(space, n, m)


def find_roots(f, lo=SCAN_LO, hi=SCAN_HI, points=SCAN_POINTS):
    """Brackets ``(a, b)`` of all sign changes of ``f`` on a geometric probe grid."""
    xs = np.geomspace(lo, hi, points)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.array([f(x) for x in xs])
    brackets = []
    for k in range(points - 1):
        fa, fb = vals[k], vals[k + 1]
        if np.isfinite(fa) and np.isfinite(fb) and fa * fb < 0:
            brackets.append((xs[k], xs[k + 1]))
    return brackets


def _solve_bracketed(f, fprime, bracket):
    """Bisection (Brent) on ``bracket`` followed by Newton polishing."""
    x = sopt.brentq(f, *bracket, xtol=1e-13, maxiter=500)
    return _newton_polish(f, fprime, x, bracket)


def _newton_polish(f, fprime, x, bracket, tol=1e-12, maxiter=50):
    """Safeguarded Newton iteration inside a sign-change bracket."""
    lo, hi = bracket
    flo = f(lo)
    for it in range(1, maxiter + 1):
        fx = f(x)
        if fx == 0.0:
            return x, it
        if flo * fx < 0:
            hi = x
        else:
            lo, flo = x, fx
        dfx = fprime(x)
        x_new = x - fx / dfx if dfx != 0 else np.nan
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= tol * max(1.0, abs(x)):
            return x_new, it
        x = x_new
    return x, maxiter


# -- free-boundary design for all parameters --------------------------------

def g1(x, n):
    e = np.exp(x)
    return (e ** 5 * n * (1 - x) + e ** 4 * (2 * n * x - 3 * x - n + 2)
            + e ** 3 * x * (1 - 4 * n) + e ** 2 * x * (4 * n - 7)
            + e * (x - n - n * x) + n - 2)


def g2(x, n):
    e = np.exp(x)
    return (e ** 3 * n * (1 - 2 * x) + e ** 2 * (3 * n * x - 5 * x + 2 - n)
            + e * (x - n - n * x) + n - 2)


def _g1_prime(x, n):
    e = np.exp(x)
    return (e ** 5 * n * (5 * (1 - x) - 1)
            + e ** 4 * (4 * (2 * n * x - 3 * x - n + 2) + 2 * n - 3)
            + e ** 3 * (1 - 4 * n) * (3 * x + 1)
            + e ** 2 * (4 * n - 7) * (2 * x + 1)
            + e * (x - n - n * x + 1 - n))


def _g2_prime(x, n):
    e = np.exp(x)
    return (e ** 3 * n * (3 * (1 - 2 * x) - 2)
            + e ** 2 * (2 * (3 * n * x - 5 * x + 2 - n) + 3 * n - 5)
            + e * (x - n - n * x + 1 - n))


def free_boundary_equations(x, y, n):
    """Both sides of the stationarity system in ``x = alpha d, y = beta delta``.

    Returns ``((lhs1, rhs1), (lhs2, rhs2))``.
    """
    c = 4 * (n - 1) ** 2
    return ((n * n * (np.exp(2 * y) + 1) * g1(x, n), c * g2(x, n)),
            (n * n * (np.exp(2 * x) + 1) * g1(y, n), c * g2(y, n)))


def _relative_residuals(x, y, n):
    return tuple(float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
                 for lhs, rhs in free_boundary_equations(x, y, n))


@dataclass(frozen=True)
class FreeBoundarySolution:
    d_star: float
    delta_star: float
    value: float
    iterations: int
    residuals: tuple
    roots_found: int = 1


def solve_all_params_free(n: int, params: CovParams) -> FreeBoundarySolution:
    """D-optimal spacings of the free-boundary equidistant ``n x n`` design.

    For ``n = 2`` the criterion decreases in both spacings and the
    degenerate answer ``d = delta = 0`` is returned. For ``n >= 3`` the
    stationarity system is solved in the scaled variables ``x = alpha d``,
    ``y = beta delta``: a probe scan brackets the root on the diagonal
    ``x = y`` (the system is symmetric), Brent's method isolates it, and a
    damped two-dimensional Newton iteration polishes it.
    Residuals are reported relative to the size of the equation sides.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if n == 2:
        return FreeBoundarySolution(0.0, 0.0, math.inf, 0, (0.0, 0.0), 0)

    c = 4 * (n - 1) ** 2

    def diag(x):
        return n * n * (np.exp(2 * x) + 1) * g1(x, n) - c * g2(x, n)

    roots = [sopt.brentq(diag, a, b, xtol=1e-15) for a, b in find_roots(diag)]
    if not roots:
        raise NoSolutionError("no sign change of the stationarity equation",
                              {"n": n, "scan": (SCAN_LO, SCAN_HI, SCAN_POINTS)})
    if len(roots) > 1:
        # uniqueness is only known empirically; keep the best maximizer
        vals = [fisher.det_m_all_free_equidistant(
            n, n, r / params.alpha, r / params.beta, params) for r in roots]
        roots = [roots[int(np.argmax(vals))]] + roots
    x = y = roots[0]

    def system(v):
        (l1, r1), (l2, r2) = free_boundary_equations(v[0], v[1], n)
        return np.array([l1 - r1, l2 - r2])

    def jac(v):
        a, b = v
        j11 = n * n * (np.exp(2 * b) + 1) * _g1_prime(a, n) - c * _g2_prime(a, n)
        j12 = n * n * 2 * np.exp(2 * b) * g1(a, n)
        j21 = n * n * 2 * np.exp(2 * a) * g1(b, n)
        j22 = n * n * (np.exp(2 * a) + 1) * _g1_prime(b, n) - c * _g2_prime(b, n)
        return np.array([[j11, j12], [j21, j22]])

    v = np.array([x, y])
    it = 0
    for it in range(1, 51):
        fv = system(v)
        step = np.linalg.solve(jac(v), fv)
        lam = 1.0
        # damping: halve until the residual norm does not grow
        while lam > 1e-6:
            trial = v - lam * step
            if np.all(trial > 0) and (np.linalg.norm(system(trial))
                                      <= np.linalg.norm(fv)):
                break
            lam *= 0.5
        else:
            break
        v = trial
        if np.max(np.abs(lam * step)) <= 1e-15 * max(1.0, np.max(np.abs(v))):
            break
    xs, ys = float(v[0]), float(v[1])
    d, delta = xs / params.alpha, ys / params.beta
    return FreeBoundarySolution(
        d, delta, float(fisher.det_m_all_free_equidistant(n, n, d, delta, params)),
        it, _relative_residuals(xs, ys, n), len(set(roots)))


class DesignClass(enum.Enum):
    MONOTONE_DECREASING = "MonotoneDecreasing"
    RIDGE_MAXIMUM = "RidgeMaximum"


def covariance_design_classification(n: int, m: int) -> DesignClass:
    """Shape of ``det M_r`` for free-boundary equidistant ``n x m`` grids.

    Monotone decreasing in both spacings (supremum at ``d = delta = 0``)
    iff ``nm >= 2(n-1)(m-1)``; otherwise, for small fixed spacing in one
    direction, there is a single maximum in the other.
    """
    if n < 2 or m < 2:
        raise DomainError(f"need n, m >= 2, got {n}, {m}")
    if n * m >= 2 * (n - 1) * (m - 1):
        return DesignClass.MONOTONE_DECREASING
    return DesignClass.RIDGE_MAXIMUM


# -- two-point Arrhenius designs --------------------------------------------

def maximin_equation(delta, mu, B, beta):
    """``(B - (mu+1) delta)(exp(2 beta delta) - 1) - beta delta^2``."""
    return (B - (mu + 1) * delta) * np.expm1(2 * beta * delta) - beta * delta ** 2


def maximin_two_point(mu, B, beta=1.0) -> float:
    """Optimal temperature spacing of the four-point Arrhenius design.

    For ``mu < -1`` this is the maximizer ``-(mu+1)/B`` of the worst case
    over the correlation parameters. For ``mu > -1`` it is the unique root
    of :func:`maximin_equation`, which maximizes ``M_B(2, 2)`` in ``delta``.
    """
    if not B > 0:
        raise DomainError(f"B must be positive, got {B}")
    if mu == -1:
        raise DomainError("mu = -1 is not covered (boundary case)")
    if mu < -1:
        return -(mu + 1.0) / B
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    f = lambda x: maximin_equation(x, mu, B, beta)
    brackets = find_roots(f, hi=B / (mu + 1.0) * (1 + 1e-12))
    if not brackets:
        raise NoSolutionError("no root of the two-point equation",
                              {"mu": mu, "B": B, "beta": beta})
    fp = lambda x: (-(mu + 1) * np.expm1(2 * beta * x)
                    + 2 * beta * (B - (mu + 1) * x) * np.exp(2 * beta * x)
                    - 2 * beta * x)
    root, _ = _solve_bracketed(f, fp, brackets[0])
    return float(root)


def joint_two_point_u(delta, mu, B, beta, p):
    """Left side ``U(delta)`` of the stationarity equation in ``delta``."""
    e2 = np.exp(2 * beta * delta)
    bd2 = beta * delta ** 2
    return (bd2 - mu * delta + B
            + e2 * (2 * beta * (2 + p * p) * delta ** 2 + (B - mu * delta) * p * p)
            + e2 * e2 * (1 + p * p) * (bd2 + mu * delta - B))


def joint_two_point_delta(mu, B, beta, p) -> float:
    """Temperature spacing maximizing the four-point known-``mu`` criterion.

    ``p = exp(-alpha d)`` is the correlation in the environment direction.
    Returns the unique positive root of :func:`joint_two_point_u`.
    """
    if not B > 0:
        raise DomainError(f"B must be positive, got {B}")
    if not 0 <= p < 1:
        raise DomainError(f"p must lie in [0, 1), got {p}")
    f = lambda x: joint_two_point_u(x, mu, B, beta, p)
    hi = B / mu if mu > 0 else SCAN_HI
    brackets = find_roots(f, hi=hi)
    if not brackets:
        raise NoSolutionError("no root of U(delta)",
                              {"mu": mu, "B": B, "beta": beta, "p": p})
    if len(brackets) > 1:
        raise NoSolutionError("U(delta) has several roots",
                              {"brackets": brackets})

    def fp(x):
        e2 = np.exp(2 * beta * x)
        pp = p * p
        return (2 * beta * x - mu
                + 2 * beta * e2 * (2 * beta * (2 + pp) * x ** 2 + (B - mu * x) * pp)
                + e2 * (4 * beta * (2 + pp) * x - mu * pp)
                + 4 * beta * e2 * e2 * (1 + pp) * (beta * x ** 2 + mu * x - B)
                + e2 * e2 * (1 + pp) * (2 * beta * x + mu))

    root, _ = _solve_bracketed(f, fp, brackets[0])
    return float(root)


# -- monotonic chains -----------------------------------------------------

@dataclass
class OptimizationReport:
    design: object
    value: float
    criterion: str
    method: str
    seed: int | None = None
    trace: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        from .design import design_to_json
        import json
        return {"criterion": self.criterion, "method": self.method,
                "value": self.value, "seed": self.seed,
                "design": json.loads(design_to_json(self.design)),
                "trace": list(self.trace), "metadata": dict(self.metadata)}


def _link_objective(criterion):
    """Per-link value and slope of a separable chain criterion."""
    if criterion == "trend-D":
        return (lambda x: np.tanh(0.5 * x),
                lambda x: 0.5 / np.cosh(0.5 * x) ** 2)
    if criterion == "entropy":
        with np.errstate(divide="ignore"):
            return (lambda x: 0.5 * np.log(-np.expm1(-2.0 * x)),
                    lambda x: 1.0 / np.expm1(2.0 * x))
    raise ValueError(f"unknown chain criterion {criterion!r}")


def _ascend(ds, dt, alpha, beta, value, slope, tol, max_steps):
    """Pairwise coordinate ascent on increments with fixed totals.

    Each step moves mass of one coordinate from the link with the smallest
    marginal gain to the one with the largest, by the exact maximizer of the
    (concave, symmetric) two-link subproblem, clipped to keep increments
    nonnegative.
    """
    x = alpha * ds + beta * dt
    total = math.fsum(value(x))
    steps = 0
    stall = 0
    while steps < max_steps:
        gain = slope(x)
        moved = 0.0
        for coord, w in ((ds, alpha), (dt, beta)):
            donors = np.flatnonzero(coord > 0)
            if donors.size == 0:
                continue
            j = donors[np.argmin(gain[donors])]
            i = int(np.argmax(gain))
            if i == j or gain[i] <= gain[j]:
                continue
            # equalize x_i and x_j (optimal for two identical concave links)
            tau = min((x[j] - x[i]) / (2.0 * w), coord[j])
            if tau <= 0:
                continue
            coord[i] += tau
            coord[j] -= tau
            x[i] += w * tau
            x[j] -= w * tau
            gain = slope(x)
            moved += tau
            steps += 1
        new_total = math.fsum(value(x))
        improvement = new_total - total
        total = new_total
        stall = stall + 1 if improvement < tol else 0
        if moved == 0.0 or stall >= 3:
            break
    return total, steps


def _chain_from_increments(space, ds, dt):
    s = space.a1 + np.concatenate([[0.0], np.cumsum(ds)])
    t = space.a2 + np.concatenate([[0.0], np.cumsum(dt)])
    s[-1] = space.b1
    t[-1] = space.b2
    s = np.minimum(np.maximum.accumulate(s), space.b1)
    t = np.minimum(np.maximum.accumulate(t), space.b2)
    return MonotonicChain(np.column_stack([s, t]), space)


def optimize_monotonic_chain(space: DesignSpace, k: int, params: CovParams,
                             criterion: str = "trend-D", starts: int = 32,
                             seed: int = 0, tol: float = 1e-10,
                             max_steps: int = 200000) -> OptimizationReport:
    """Best ``k``-point monotonic chain from the lower-left to the upper-right corner.

    Multi-start (Dirichlet-random increments) pairwise coordinate ascent;
    each start stops once a round improves the criterion by less than
    ``tol``. The reported value is recomputed on the returned chain.
    """
    if k < 2:
        raise DomainError(f"chain needs k >= 2, got {k}")
    value, slope = _link_objective(criterion)
    evaluate = (fisher.m_theta_monotonic if criterion == "trend-D"
                else entropy_monotonic)
    rng = np.random.default_rng(seed)
    best = None
    trace = []
    for start in range(starts):
        ds = rng.dirichlet(np.ones(k - 1)) * space.width
        dt = rng.dirichlet(np.ones(k - 1)) * space.height
        with np.errstate(divide="ignore", over="ignore"):
            _, steps = _ascend(ds, dt, params.alpha, params.beta, value, slope,
                               tol, max_steps)
        chain = _chain_from_increments(space, ds, dt)
        val = evaluate(chain, params)
        trace.append({"start": start, "value": val, "steps": steps})
        if best is None or val > best[0]:
            best = (val, chain)
    return OptimizationReport(best[1], best[0], criterion,
                              "multistart-pairwise-coordinate-ascent",
                              seed=seed, trace=trace,
                              metadata={"k": k, "starts": starts, "tol": tol,
                                        "alpha": params.alpha,
                                        "beta": params.beta,
                                        "sigma": params.sigma})


# -- lattice scans for surface plots ----------------------------------------

TABLE1_SPACE = DesignSpace(223.0, 420.0, 0.84, 43.51)


def _restricted_33(d, delta):
    return GridDesign([0.0, d, 1.0], [0.0, delta, 1.0])


def _scan_det_m_r_33(d, delta, params, n):
    return fisher.m_r(_restricted_33(d, delta), params).det


def _scan_det_m_33(d, delta, params, n):
    return fisher.det_m_all(_restricted_33(d, delta), params)


def _scan_det_r_free(d, delta, params, n):
    return fisher.det_m_r_equidistant(n, n, d, delta, params)


def _scan_det_free(d, delta, params, n):
    return fisher.det_m_all_free_equidistant(n, n, d, delta, params)


def _scan_m_theta_88(alpha, beta, params, n):
    grid = make_equidistant_grid(TABLE1_SPACE, 8, 8)
    return fisher.m_theta(grid, CovParams(alpha, beta, params.sigma))


SURFACE_OBJECTIVES = {
    "det_m_r_33": _scan_det_m_r_33,
    "det_m_33": _scan_det_m_33,
    "det_r_free": _scan_det_r_free,
    "det_free": _scan_det_free,
    "m_theta_88": _scan_m_theta_88,
}
_VECTORIZED = ("det_r_free", "det_free")


def surface_scan(objective: str, params: CovParams, xs, ys, n: int = 6
                 ) -> np.ndarray:
    """Evaluate ``objective`` on the lattice ``xs x ys``.

    Returns an ``(len(xs) * len(ys), 3)`` array of rows ``(x, y, value)``
    with ``x`` varying slowest. For ``m_theta_88`` the axes are the decay
    rates ``(alpha, beta)``; otherwise the spacings ``(d, delta)``.
    The restricted 3x3 objectives need ``0 < d, delta < 1``.
    """
    try:
        fn = SURFACE_OBJECTIVES[objective]
    except KeyError:
        raise ValueError(f"unknown surface objective {objective!r}") from None
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("scan ranges must be positive")
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    if objective in _VECTORIZED:
        vals = fn(X, Y, params, n)
    else:
        vals = np.array([fn(x, y, params, n)
                         for x, y in zip(X.ravel(), Y.ravel())])
    return np.column_stack([X.ravel(), Y.ravel(), np.ravel(vals)])
