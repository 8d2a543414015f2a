import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oudesign import CovParams, ExtrapolationError, GridDesign, MonotonicChain
from oudesign import oracle, prediction
from oudesign.design import make_equidistant_grid

from helpers import TABLE1_SPACE, random_chain, random_grid, random_params

LOG2PI = math.log(2 * math.pi)


def test_mspe_zero_at_design_points(rng):
    g = random_grid(rng, 3, 4)
    p = random_params(rng)
    for s in g.s:
        for t in g.t:
            assert prediction.mspe((s, t), g, p) == pytest.approx(0.0, abs=1e-13)


def test_mspe_two_by_two_matches_bordered():
    g = GridDesign([0, 1], [0, 1])
    p = CovParams(1, 1, 1)
    got = prediction.mspe(prediction.PredictionPoint(0.5, 0.5), g, p)
    ref = oracle.mspe_bordered([0.5, 0.5], g.points(), p)
    assert math.isclose(got, ref, rel_tol=1e-12)


def test_mspe_scales_with_sigma(rng):
    g = random_grid(rng, 3, 3)
    x = (g.s[0] + 0.3 * (g.s[-1] - g.s[0]), g.t[0] + 0.6 * (g.t[-1] - g.t[0]))
    v1 = prediction.mspe(x, g, CovParams(0.7, 1.2, 1.0))
    v3 = prediction.mspe(x, g, CovParams(0.7, 1.2, 3.0))
    assert math.isclose(v3, 9 * v1, rel_tol=1e-14)


def test_mspe_refuses_extrapolation():
    g = GridDesign([0, 1], [0, 1])
    with pytest.raises(ExtrapolationError):
        prediction.mspe((1.5, 0.5), g, CovParams(1, 1))


def test_mspe_vectorized(rng):
    g = random_grid(rng, 4, 3)
    p = random_params(rng)
    xs = rng.uniform(g.s[0], g.s[-1], 30)
    ys = rng.uniform(g.t[0], g.t[-1], 30)
    vec = prediction.mspe((xs, ys), g, p)
    one = [prediction.mspe((x, y), g, p) for x, y in zip(xs, ys)]
    assert np.allclose(vec, one, rtol=1e-15, atol=0)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6), st.integers(0, 2 ** 32 - 1),
       st.floats(0, 1), st.floats(0, 1))
def test_mspe_nonnegative_and_matches_oracle(n, m, seed, u, v):
    rng = np.random.default_rng(seed)
    g = random_grid(rng, n, m)
    p = random_params(rng)
    x = (g.s[0] + u * (g.s[-1] - g.s[0]), g.t[0] + v * (g.t[-1] - g.t[0]))
    got = prediction.mspe(x, g, p)
    assert got >= 0
    ref = oracle.mspe_bordered(np.array(x), g.points(), p)
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref)) + 1e-13


def test_mspe_can_exceed_sigma2_with_unknown_mean():
    # the estimated constant adds variance: far from weakly correlated data
    # the MSPE tends to sigma^2 (1 + 1/M_theta)
    g = GridDesign([0, 100], [0, 100])
    v = prediction.mspe((50, 50), g, CovParams(1, 1, 1))
    assert math.isclose(v, 1.25, rel_tol=1e-12)


def test_imspe_unit_square_example():
    g = GridDesign([0, 1], [0, 1])
    p = CovParams(1, 1)
    v = prediction.imspe(g, p)
    assert abs(v - 0.5389) < 5e-5
    assert abs(v - oracle.imspe_quadrature(g.points(), p, tol=1e-9)) < 1e-6


def test_imspe_independence_limit():
    # p, q -> 0: average MSPE/sigma^2 tends to 1 + 1/(nm)
    for n, m in [(2, 2), (3, 4)]:
        g = make_equidistant_grid(TABLE1_SPACE, n, m)
        v = prediction.imspe(g, CovParams(1e4, 1e4))
        assert abs(v - (1 + 1 / (n * m))) < 1e-2
    vals = [prediction.imspe(GridDesign([0, 1], [0, 1]), CovParams(r, r))
            for r in (10, 100, 1000, 10000)]
    assert np.all(np.diff(np.abs(np.array(vals) - 1.25)) < 0)


def test_imspe_invariant_under_affine_rescaling(rng):
    g = random_grid(rng, 3, 4)
    p = random_params(rng)
    g2 = GridDesign(10 + 3 * g.s, -5 + 0.5 * g.t)
    p2 = CovParams(p.alpha / 3, p.beta / 0.5)
    assert math.isclose(prediction.imspe(g, p), prediction.imspe(g2, p2),
                        rel_tol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_imspe_equidistant_minimizes(n, rng):
    p = CovParams(1.3, 0.8)
    space = TABLE1_SPACE.__class__(0, 1, 0, 1)
    base = prediction.imspe(make_equidistant_grid(space, n, n), p)
    for _ in range(100):
        s = np.r_[0, np.sort(rng.uniform(0, 1, n - 2)), 1]
        t = np.r_[0, np.sort(rng.uniform(0, 1, n - 2)), 1]
        assert prediction.imspe(GridDesign(s, t), p) >= base - 1e-12


@pytest.mark.parametrize("a, b, expected, tol", [
    (1.0, 10.0, 90.8121, 5e-4), (0.001, 0.01, -51.1507, 1e-2)])
def test_entropy_table1(a, b, expected, tol):
    g = make_equidistant_grid(TABLE1_SPACE, 8, 8)
    assert abs(prediction.entropy(g, CovParams(a, b, 1.0)) - expected) <= tol


def test_entropy_independent_limit():
    g = GridDesign([0, 1e3, 2e3], [0, 1e3])
    assert math.isclose(prediction.entropy(g, CovParams(1, 1, 2.0)),
                        3 * (1 + LOG2PI + 2 * math.log(2.0)), rel_tol=1e-15)


def test_entropy_matches_oracle(rng):
    g = random_grid(rng, 5, 6)
    p = random_params(rng, sigma=1.7)
    assert math.isclose(prediction.entropy(g, p),
                        oracle.entropy_dense(g.points(), p), rel_tol=1e-10)


def test_entropy_monotonic(rng):
    c = MonotonicChain([(0, 0), (1e3, 0)])
    assert math.isclose(prediction.entropy_monotonic(c, CovParams(1, 1, 1)),
                        1 + LOG2PI, rel_tol=1e-15)
    c = random_chain(rng, 10)
    p = random_params(rng)
    assert math.isclose(prediction.entropy_monotonic(c, p),
                        oracle.entropy_dense(c.points, p), rel_tol=1e-10)
    vals = [prediction.entropy_monotonic(
        MonotonicChain([(0, 0), (gap, 0), (1, 1)]), CovParams(1, 1))
        for gap in (0.5, 0.1, 1e-2, 1e-4, 1e-8)]
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_entropy_equidistant_maximizes(n, rng):
    p = CovParams(0.9, 1.4)
    base = prediction.entropy(GridDesign(np.linspace(0, 1, n),
                                         np.linspace(0, 1, n)), p)
    for _ in range(100):
        s = np.r_[0, np.sort(rng.uniform(0, 1, n - 2)), 1]
        t = np.r_[0, np.sort(rng.uniform(0, 1, n - 2)), 1]
        assert prediction.entropy(GridDesign(s, t), p) <= base + 1e-12
