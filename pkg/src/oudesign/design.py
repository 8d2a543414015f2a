"""Design spaces, grid designs, monotonic chains and model parameters.

Coordinates follow the convention of the methane-flux model: the first
coordinate ``s`` is the environment variable (pressure, latitude, ...), the
second coordinate ``t`` is temperature. Only ``t`` enters the Arrhenius trend.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (BoundsError, DegenerateChainError, DesignError,
                     DomainError, MonotonicityError)

__all__ = [
    "DesignSpace", "GridDesign", "Spacings", "MonotonicChain", "CovParams",
    "ConstantTrend", "ArrheniusTrend", "make_equidistant_grid", "spacings",
    "make_monotonic_chain", "design_to_json", "design_from_json",
]


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DesignSpace:
    """The rectangle ``[a1, b1] x [a2, b2]``."""

    a1: float
    b1: float
    a2: float
    b2: float

    def __post_init__(self):
        vals = (self.a1, self.b1, self.a2, self.b2)
        if not all(math.isfinite(v) for v in vals):
            raise DesignError(f"design space bounds must be finite, got {vals}")
        if not (self.b1 > self.a1 and self.b2 > self.a2):
            raise DesignError(f"empty design space {vals}")

    @property
    def width(self) -> float:
        return self.b1 - self.a1

    @property
    def height(self) -> float:
        return self.b2 - self.a2

    def contains(self, s, t) -> bool:
        s = np.asarray(s)
        t = np.asarray(t)
        return bool(np.all((s >= self.a1) & (s <= self.b1)
                           & (t >= self.a2) & (t <= self.b2)))

    def as_list(self) -> list:
        return [self.a1, self.b1, self.a2, self.b2]


UNIT_SQUARE = DesignSpace(0.0, 1.0, 0.0, 1.0)


class GridDesign:
    """The ``n x m`` grid ``{(s_i, t_j)}`` with strictly increasing axes.

    Points are enumerated lexicographically (``s`` slow, ``t`` fast), which
    is the ordering under which the correlation matrix factors as ``P kron Q``.
    """

    __slots__ = ("s", "t", "space")

    def __init__(self, s: Sequence[float], t: Sequence[float],
                 space: DesignSpace | None = None):
        s = _frozen_array(s)
        t = _frozen_array(t)
        if s.ndim != 1 or t.ndim != 1:
            raise DesignError("grid axes must be one-dimensional")
        if s.size < 2 or t.size < 2:
            raise DesignError(
                f"grid needs at least 2 points per axis, got {s.size}x{t.size}")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(t))):
            raise DesignError("grid coordinates must be finite")
        # coincident abscissas make the correlation matrix singular
        if np.any(np.diff(s) <= 0) or np.any(np.diff(t) <= 0):
            raise DesignError("grid axes must be strictly increasing")
        if space is None:
            space = DesignSpace(s[0], s[-1], t[0], t[-1])
        elif not space.contains(s[[0, -1]], t[[0, -1]]):
            raise BoundsError("grid points outside the design space")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "space", space)

    def __setattr__(self, name, value):
        raise AttributeError("GridDesign is immutable")

    @property
    def n(self) -> int:
        return self.s.size

    @property
    def m(self) -> int:
        return self.t.size

    @property
    def shape(self) -> tuple:
        return (self.n, self.m)

    def points(self) -> np.ndarray:
        """All ``n*m`` design points as an ``(n*m, 2)`` array."""
        ss, tt = np.meshgrid(self.s, self.t, indexing="ij")
        return np.column_stack([ss.ravel(), tt.ravel()])

    def __eq__(self, other):
        if not isinstance(other, GridDesign):
            return NotImplemented
        return (np.array_equal(self.s, other.s)
                and np.array_equal(self.t, other.t)
                and self.space == other.space)

    def __repr__(self):
        return f"GridDesign(n={self.n}, m={self.m}, space={self.space})"

    @classmethod
    def from_spacings(cls, d, delta, origin=(0.0, 0.0)) -> "GridDesign":
        """Grid starting at ``origin`` with the given adjacent distances."""
        d = np.asarray(d, dtype=float)
        delta = np.asarray(delta, dtype=float)
        s = origin[0] + np.concatenate([[0.0], np.cumsum(d)])
        t = origin[1] + np.concatenate([[0.0], np.cumsum(delta)])
        return cls(s, t)


@dataclass(frozen=True)
class Spacings:
    """Adjacent distances ``d_i = s_{i+1} - s_i`` and ``delta_j``."""

    d: np.ndarray
    delta: np.ndarray


def make_equidistant_grid(space: DesignSpace, n: int, m: int) -> GridDesign:
    """Endpoint-inclusive, uniformly spaced ``n x m`` grid on ``space``."""
    if n < 2 or m < 2:
        raise DesignError(f"equidistant grid needs n, m >= 2, got {n}, {m}")
    s = np.linspace(space.a1, space.b1, n)
    t = np.linspace(space.a2, space.b2, m)
    return GridDesign(s, t, space)


def spacings(design: GridDesign) -> Spacings:
    return Spacings(_frozen_array(np.diff(design.s)),
                    _frozen_array(np.diff(design.t)))


class MonotonicChain:
    """Planar points nondecreasing in both coordinates.

    Along such a chain the coordinate distances are additive, so the
    separable exponential covariance restricted to the chain is that of a
    Markov (OU-type) sequence.
    """

    __slots__ = ("points", "space")

    def __init__(self, points, space: DesignSpace | None = None):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DesignError("chain points must have shape (k, 2)")
        if pts.shape[0] < 2:
            raise DesignError("a chain needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise DesignError("chain coordinates must be finite")
        steps = np.diff(pts, axis=0)
        if np.any(steps < 0):
            raise MonotonicityError(
                "chain coordinates must be nondecreasing in both s and t")
        if np.any(np.all(steps == 0, axis=1)):
            raise DegenerateChainError("chain contains a repeated point")
        if space is None:
            space = DesignSpace(pts[0, 0], max(pts[-1, 0], pts[0, 0] + 1.0),
                                pts[0, 1], max(pts[-1, 1], pts[0, 1] + 1.0))
        elif not space.contains(pts[:, 0], pts[:, 1]):
            raise BoundsError("chain points outside the design space")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "space", space)

    def __setattr__(self, name, value):
        raise AttributeError("MonotonicChain is immutable")

    @property
    def k(self) -> int:
        return self.points.shape[0]

    def increments(self) -> tuple:
        """``(|ds_i|, |dt_i|)`` between consecutive chain points."""
        steps = np.diff(self.points, axis=0)
        return steps[:, 0], steps[:, 1]

    def __eq__(self, other):
        if not isinstance(other, MonotonicChain):
            return NotImplemented
        return (np.array_equal(self.points, other.points)
                and self.space == other.space)

    def __repr__(self):
        return f"MonotonicChain(k={self.k}, space={self.space})"


def make_monotonic_chain(points, space: DesignSpace | None = None
                         ) -> MonotonicChain:
    """Sort ``points`` lexicographically and validate them as a chain."""
    pts = np.array(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DesignError("chain points must have shape (k, 2)")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return MonotonicChain(pts[order], space)


@dataclass(frozen=True)
class CovParams:
    """Decay rates of the OU sheet and its scale.

    ``sigma`` is the marginal standard deviation. The raw Brownian-sheet
    scale is ``sigma_tilde = 2 sigma sqrt(alpha beta)``.
    """

    alpha: float
    beta: float
    sigma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "sigma"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v}")

    @classmethod
    def from_raw_scale(cls, alpha, beta, sigma_tilde) -> "CovParams":
        return cls(alpha, beta, sigma_tilde / (2.0 * math.sqrt(alpha * beta)))

    @property
    def sigma_tilde(self) -> float:
        return 2.0 * self.sigma * math.sqrt(self.alpha * self.beta)


@dataclass(frozen=True)
class ConstantTrend:
    theta: float = 0.0

    def eta(self, s, t):
        return np.full(np.broadcast(np.asarray(s), np.asarray(t)).shape,
                       float(self.theta))


@dataclass(frozen=True)
class ArrheniusTrend:
    """Modified Arrhenius trend ``t**(-mu) * exp(-B/t)`` with ``A = 1``."""

    mu: float
    B: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.B)):
            raise DomainError("mu and B must be finite")
        if self.B < 0:
            raise DomainError(f"B must be nonnegative, got {self.B}")

    def eta(self, s, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise DomainError("Arrhenius trend needs t >= 0")
        out = np.zeros(np.broadcast(np.asarray(s), t).shape)
        pos = np.broadcast_to(t > 0, out.shape)
        tt = np.broadcast_to(t, out.shape)[pos]
        out[pos] = tt ** (-self.mu) * np.exp(-self.B / tt)
        return out


# -- JSON descriptors -------------------------------------------------------
# json emits floats with repr(), the shortest string that round-trips exactly.

def design_to_json(design) -> str:
    if isinstance(design, GridDesign):
        payload = {"space": design.space.as_list(),
                   "s": design.s.tolist(), "t": design.t.tolist()}
    elif isinstance(design, MonotonicChain):
        payload = {"space": design.space.as_list(),
                   "chain": design.points.tolist()}
    else:
        raise TypeError(f"cannot serialize {type(design).__name__}")
    return json.dumps(payload)


def design_from_json(text: str):
    payload = json.loads(text)
    space = DesignSpace(*payload["space"]) if "space" in payload else None
    if "chain" in payload:
        return MonotonicChain(payload["chain"], space)
    if "s" in payload and "t" in payload:
        return GridDesign(payload["s"], payload["t"], space)
    raise DesignError("descriptor needs either 's'/'t' or 'chain'")
