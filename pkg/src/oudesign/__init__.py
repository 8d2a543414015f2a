"""Optimal designs for Ornstein-Uhlenbeck sheets.

Closed-form D-optimality, IMSPE and entropy criteria for grid designs and
monotonic chains under the separable exponential covariance
``sigma^2 exp(-alpha |ds| - beta |dt|)``, with constant or modified
Arrhenius trend, plus dense reference implementations and optimizers.
"""
from .design import (ArrheniusTrend, ConstantTrend, CovParams, DesignSpace,
                     GridDesign, MonotonicChain, Spacings, design_from_json,
                     design_to_json, make_equidistant_grid,
                     make_monotonic_chain, spacings)
from .errors import (AccuracyError, BoundsError, DegenerateChainError,
                     DesignError, DomainError, ExtrapolationError,
                     FactorizationError, MonotonicityError, NoSolutionError,
                     SingularityError)

__version__ = "0.1.0"
