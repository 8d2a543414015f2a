import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oudesign import CovParams, GridDesign, SingularityError
from oudesign.covariance import (CorrelationFactor, chain_factor,
                                 correlation_factors, covariance_derivatives,
                                 dense_covariance, factor_inverse,
                                 factor_log_det, semivariogram)
from oudesign.design import make_equidistant_grid

from helpers import TABLE1_SPACE, random_chain, random_grid, random_params


def test_factor_from_spacing():
    P, Q = correlation_factors(GridDesign([0, math.log(2)], [0, 1]),
                               CovParams(1.0, 1.0))
    assert np.allclose(P.p, [0.5], rtol=1e-15)
    assert np.allclose(Q.p, [math.exp(-1)], rtol=1e-15)


def test_factor_table1_grid():
    P, _ = correlation_factors(make_equidistant_grid(TABLE1_SPACE, 8, 8),
                               CovParams(0.001, 0.01))
    assert np.allclose(P.p, math.exp(-0.197 / 7), rtol=1e-14)
    assert abs(P.p[0] - 0.972250) < 1e-6
    C = dense_covariance(make_equidistant_grid(TABLE1_SPACE, 8, 8).points(),
                         CovParams(0.001, 0.01))
    assert math.isclose(C[0, 8], P.p[0] * 1.0, rel_tol=1e-14)


def test_underflowing_factor_is_independent():
    # exp(-x) underflows to 0 for x > 745: the factor becomes the identity
    f = CorrelationFactor([800.0, 1000.0])
    assert np.all(f.p == 0.0)
    assert np.array_equal(factor_inverse(f), np.eye(3))
    assert factor_log_det(f) == 0.0


def test_coincident_points_are_singular():
    with pytest.raises(SingularityError):
        CorrelationFactor([0.0])
    with pytest.raises(SingularityError):
        CorrelationFactor.from_correlations([1.0])


def test_factor_inverse_examples():
    inv = factor_inverse(CorrelationFactor.from_correlations([0.5]))
    assert np.allclose(inv, [[4 / 3, -2 / 3], [-2 / 3, 4 / 3]], rtol=1e-15)
    inv = factor_inverse(CorrelationFactor.from_correlations([0.5, 0.5]))
    assert np.allclose(np.diag(inv), [4 / 3, 5 / 3, 4 / 3], rtol=1e-15)
    assert np.allclose(np.diag(inv, 1), -2 / 3, rtol=1e-15)
    assert np.all(np.diag(inv, 2) == 0)
    assert np.allclose(factor_inverse(CorrelationFactor.from_correlations(
        [0.0, 0.0, 0.0])), np.eye(4))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(min_value=1e-3, max_value=30.0), min_size=1,
                max_size=12))
def test_inverse_identity(x):
    f = CorrelationFactor(x)
    P = f.dense()
    assert np.allclose(factor_inverse(f) @ P, np.eye(len(x) + 1),
                       rtol=0, atol=1e-12 * max(1.0, np.abs(factor_inverse(f)).max()))


def test_log_det_examples(rng):
    assert math.isclose(factor_log_det(CorrelationFactor.from_correlations([0.5])),
                        math.log(0.75), rel_tol=1e-15)
    assert factor_log_det(CorrelationFactor([])) == 0.0
    f = CorrelationFactor(rng.uniform(0.01, 2.0, 7))
    sign, ld = np.linalg.slogdet(f.dense())
    assert sign > 0 and math.isclose(factor_log_det(f), ld, rel_tol=1e-12,
                                     abs_tol=1e-12)


def test_dense_covariance_examples():
    C = dense_covariance([[0, 0], [1, 1]], CovParams(1, 1, 1))
    assert math.isclose(C[0, 1], math.exp(-2), rel_tol=1e-15)
    C = dense_covariance([[0, 0], [0.7, 0]], CovParams(2, 5, 1))
    assert math.isclose(C[0, 1], math.exp(-1.4), rel_tol=1e-15)
    C = dense_covariance([[0, 0], [1, 1]], CovParams(1, 1, 3))
    assert C[0, 0] == 9.0
    with pytest.raises(SingularityError):
        dense_covariance([[0, 0], [0, 0]], CovParams(1, 1))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
def test_kronecker_identity(n, m, seed):
    rng = np.random.default_rng(seed)
    g = random_grid(rng, n, m)
    p = random_params(rng)
    P, Q = correlation_factors(g, p)
    C = dense_covariance(g.points(), p)
    assert np.allclose(C, np.kron(P.dense(), Q.dense()), rtol=0, atol=1e-14)


def test_chain_factor_matches_dense(rng):
    chain = random_chain(rng, 9)
    p = random_params(rng)
    C = dense_covariance(chain.points, p)
    assert np.allclose(chain_factor(chain, p).dense(), C, rtol=0, atol=1e-14)


def test_covariance_derivatives(rng):
    D_a, D_b = covariance_derivatives([[0, 0], [1, 1]], CovParams(1, 1, 1))
    assert np.all(np.diag(D_a) == 0) and np.all(np.diag(D_b) == 0)
    assert math.isclose(D_a[0, 1], -math.exp(-2), rel_tol=1e-15)
    pts = rng.uniform(0, 2, (5, 2))
    p = CovParams(0.8, 1.7)
    D_a, D_b = covariance_derivatives(pts, p)
    h = 1e-6
    fd_a = (dense_covariance(pts, CovParams(0.8 + h, 1.7))
            - dense_covariance(pts, CovParams(0.8 - h, 1.7))) / (2 * h)
    fd_b = (dense_covariance(pts, CovParams(0.8, 1.7 + h))
            - dense_covariance(pts, CovParams(0.8, 1.7 - h))) / (2 * h)
    assert np.max(np.abs(D_a - fd_a)) < 1e-7
    assert np.max(np.abs(D_b - fd_b)) < 1e-7


def test_semivariogram():
    p = CovParams(1, 1, 1)
    assert semivariogram(0, 0, p) == 0.0
    assert math.isclose(semivariogram(1, 1, p), 1 - math.exp(-2), rel_tol=1e-15)
    p = CovParams(0.5, 2.0, 1.5)
    assert math.isclose(semivariogram(1e4, 0, p), p.sigma ** 2, rel_tol=1e-15)
    # variance of an increment is twice the semivariogram
    C = dense_covariance([[0, 0], [0.3, 0.4]], p)
    assert math.isclose(C[0, 0] + C[1, 1] - 2 * C[0, 1],
                        2 * semivariogram(0.3, 0.4, p), rel_tol=1e-13)
