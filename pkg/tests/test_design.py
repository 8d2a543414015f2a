import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oudesign import (ArrheniusTrend, BoundsError, ConstantTrend, CovParams,
                      DegenerateChainError, DesignError, DomainError, DesignSpace,
                      GridDesign, MonotonicChain, MonotonicityError,
                      design_from_json, design_to_json, make_equidistant_grid,
                      make_monotonic_chain, spacings)
from oudesign.design import UNIT_SQUARE

from helpers import TABLE1_SPACE


def test_equidistant_table1_grid():
    g = make_equidistant_grid(TABLE1_SPACE, 8, 8)
    sp = spacings(g)
    assert np.allclose(sp.d, 197 / 7, rtol=0, atol=1e-12)
    assert np.allclose(sp.delta, 42.67 / 7, rtol=0, atol=1e-12)
    assert g.s[0] == 223.0 and g.s[-1] == 420.0
    assert g.t[0] == 0.84 and g.t[-1] == 43.51


def test_equidistant_small():
    g = make_equidistant_grid(UNIT_SQUARE, 2, 2)
    assert g.s.tolist() == [0.0, 1.0] and g.t.tolist() == [0.0, 1.0]
    g = make_equidistant_grid(UNIT_SQUARE, 3, 3)
    assert g.s.tolist() == [0.0, 0.5, 1.0] == g.t.tolist()


@pytest.mark.parametrize("n, m", [(1, 3), (3, 1), (0, 0)])
def test_equidistant_rejects_small_counts(n, m):
    with pytest.raises(DesignError):
        make_equidistant_grid(UNIT_SQUARE, n, m)


def test_spacings():
    assert spacings(GridDesign([0, 0.5, 1], [0, 1])).d.tolist() == [0.5, 0.5]
    sp = spacings(GridDesign([0, 0.2, 1], [0, 1]))
    assert np.allclose(sp.d, [0.2, 0.8])


def test_grid_validation():
    with pytest.raises(DesignError):
        GridDesign([0, 0, 1], [0, 1])
    with pytest.raises(DesignError):
        GridDesign([0, 1], [1, 0])
    with pytest.raises(BoundsError):
        GridDesign([0, 2], [0, 1], UNIT_SQUARE)
    with pytest.raises(DesignError):
        GridDesign([0, np.nan], [0, 1])


def test_grid_is_immutable():
    g = GridDesign([0, 1], [0, 1])
    with pytest.raises((AttributeError, ValueError)):
        g.s[0] = 5.0
    with pytest.raises(AttributeError):
        g.s = np.array([0.0, 2.0])


def test_points_are_lexicographic():
    g = GridDesign([0, 1], [0, 2, 3])
    assert g.points().tolist() == [[0, 0], [0, 2], [0, 3], [1, 0], [1, 2], [1, 3]]


def test_design_space_invariants():
    with pytest.raises(DesignError):
        DesignSpace(1, 0, 0, 1)
    with pytest.raises(DesignError):
        DesignSpace(0, math.inf, 0, 1)


def test_monotonic_chain_examples():
    c = make_monotonic_chain([(0, 0), (0.5, 0.3), (1, 1)], UNIT_SQUARE)
    assert c.k == 3
    with pytest.raises(MonotonicityError):
        MonotonicChain([(0, 0.5), (0.5, 0.2)])
    with pytest.raises(DegenerateChainError):
        MonotonicChain([(0, 0), (0, 0)])
    with pytest.raises(BoundsError):
        MonotonicChain([(0, 0), (2, 2)], UNIT_SQUARE)
    with pytest.raises(DesignError):
        MonotonicChain([(0, 0)])


def test_make_monotonic_chain_sorts():
    c = make_monotonic_chain([(1, 1), (0, 0), (0.5, 0.5)])
    assert c.points[:, 0].tolist() == [0, 0.5, 1]


def test_cov_params():
    with pytest.raises(DomainError):
        CovParams(0, 1)
    with pytest.raises(DomainError):
        CovParams(1, 1, -1)
    p = CovParams.from_raw_scale(2.0, 0.5, 3.0)
    assert math.isclose(p.sigma_tilde, 3.0)
    assert math.isclose(p.sigma ** 2, 9.0 / (4 * 2.0 * 0.5))


def test_trends():
    assert np.all(ConstantTrend(2.0).eta([0, 1], [3, 4]) == 2.0)
    tr = ArrheniusTrend(mu=0.5, B=2.0)
    assert math.isclose(float(tr.eta(0.0, 2.0)), 2 ** -0.5 * math.exp(-1.0))
    assert float(tr.eta(0.0, 0.0)) == 0.0
    with pytest.raises(DomainError):
        ArrheniusTrend(mu=0.0, B=-1.0)


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
steps = st.lists(st.floats(min_value=1e-6, max_value=1e3), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(finite, finite, steps, steps)
def test_grid_json_round_trip(s0, t0, ds, dt):
    g = GridDesign(s0 + np.cumsum([0.0] + ds), t0 + np.cumsum([0.0] + dt))
    back = design_from_json(design_to_json(g))
    assert back == g
    assert back.s.tobytes() == g.s.tobytes()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 10), st.floats(1e-3, 10)),
                min_size=1, max_size=8))
def test_chain_json_round_trip(incs):
    pts = np.vstack([[0.0, 0.0], np.cumsum(incs, axis=0)])
    chain = MonotonicChain(pts)
    back = design_from_json(design_to_json(chain))
    assert back == chain
    assert back.points.tobytes() == chain.points.tobytes()


def test_json_descriptor_shape():
    g = GridDesign([0, 1], [0, 1], UNIT_SQUARE)
    payload = json.loads(design_to_json(g))
    assert payload == {"space": [0.0, 1.0, 0.0, 1.0], "s": [0.0, 1.0],
                       "t": [0.0, 1.0]}
    with pytest.raises(DesignError):
        design_from_json('{"space": [0, 1, 0, 1]}')
