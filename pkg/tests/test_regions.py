import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drsphere.core import ALPHA, State2D, dr_step_2d_array
from drsphere.regions import (CONSTANTS, EPSILON, G_ARGMIN, GAMMA, BudgetExceeded, Region,
                              UncertifiedRegime, allowed_transitions, check_step, classify,
                              classify_array, contraction_factor, g_margin, membership,
                              return_map_audit, transition_ok)
from drsphere.verify import (g_margin_grid, contract_p0, contract_p4, contract_p56, contract_p123,
                             partition, prop_no_long_runs, return_map, sample_regions)


@pytest.mark.parametrize("pt,label", [
    ((0.5, -0.2), Region.P0), ((0.9, 0.8), Region.P3), ((0.2, 0.5), Region.P6),
    ((1.0, ALPHA), Region.P2), ((0.5, 0.2), Region.P1), ((0.3, 0.9), Region.P5),
    ((1.0, 2.0), Region.P4), ((-1.0, 0.3), Region.LEFT), ((0.0, 0.3), Region.AXIS),
])
def test_classify_examples(pt, label):
    assert classify(*pt) is label
    assert int(classify_array(np.array([pt[0]]), np.array([pt[1]]))[0]) == int(label)


def test_labels_round_trip():
    for r in Region:
        assert Region.from_label(r.label) is r
    assert Region.LEFT.label == "LeftHalf" and Region.AXIS.label == "SingularAxis"


def test_constants():
    assert round(EPSILON, 4) == 0.0937
    assert abs(CONSTANTS.gamma * CONSTANTS.eta - 1) < 1e-15
    assert GAMMA ** 3 / 4 <= 0.86
    u = CONSTANTS.upsilon
    assert abs(u / math.sqrt(ALPHA ** 2 + u ** 2) - 0.18124764381) < 1e-9


def test_contraction_factors():
    assert contraction_factor(Region.P2) == 0.5
    assert contraction_factor(Region.P4) == 1.0
    assert contraction_factor(Region.P6) == GAMMA
    assert contraction_factor(Region.P0) is None
    assert contraction_factor(Region.LEFT) is None


def test_transition_table():
    assert allowed_transitions(Region.P3) == {Region.P4}
    assert allowed_transitions(Region.P5) == {Region.P6}
    assert allowed_transitions(Region.P6) == {Region.P6, Region.P1, Region.P2}
    assert allowed_transitions(Region.P0) == frozenset(Region)
    with pytest.raises(UncertifiedRegime):
        allowed_transitions(Region.P1, alpha=0.5)


def test_p6_special_cases():
    assert transition_ok(Region.P6, Region.P0, 0.5, 0.0)
    assert not transition_ok(Region.P6, Region.P0, 0.5, -1e-3)
    assert transition_ok(Region.P6, Region.P4, EPSILON / 2, 1.0)


@given(st.floats(1e-9, 3), st.floats(-3, 3))
def test_partition_property(x, y):
    assert len(membership(x, y)) == 1
    assert membership(x, y)[0] is classify(x, y)


def test_partition_sampled():
    assert partition(10 ** 6, np.random.default_rng(5)).passed


def test_check_step_examples():
    r = check_step(State2D(0.9, 0.8))
    assert r.src_region is Region.P3 and r.dst_region is Region.P4
    assert r.ratio <= 0.5 and r.allowed and r.bound_satisfied
    r = check_step(State2D(ALPHA, ALPHA))
    assert r.ratio is None and r.bound_satisfied
    r = check_step(State2D(0.3, 0.9))
    assert r.src_region is Region.P5 and r.dst_region is Region.P6 and r.ratio < GAMMA
    with pytest.raises(UncertifiedRegime):
        check_step(State2D(0.3, 0.9), alpha=0.6)


def test_return_map_examples():
    a = return_map_audit(State2D(ALPHA, ALPHA))
    assert a.m == 1 and a.ratio == 0
    for s in (State2D(0.9, 0.1), State2D(0.5, 0.4)):
        a = return_map_audit(s)
        assert a.m >= 1 and a.ratio <= 0.86
        assert a.path[0] is Region.P1 and a.path[-1] is Region.P1
    with pytest.raises(ValueError):
        return_map_audit(State2D(0.3, 0.9))
    with pytest.raises(BudgetExceeded):
        return_map_audit(State2D(0.9, 0.1), max_iter=1)


def test_g_margin_minimum():
    assert abs(g_margin(G_ARGMIN)) < 1e-12
    assert g_margin_grid().passed
    # midpoint convexity sample
    assert g_margin(0.5) < (g_margin(0.25) + g_margin(0.75)) / 2


class TestSampledContracts:
    def test_sampler_respects_margin(self):
        x, y = sample_regions(np.random.default_rng(0), (Region.P4,), 5000)
        assert np.all(classify_array(x, y) == int(Region.P4))

    def test_p123(self):
        assert contract_p123(20_000, np.random.default_rng(1)).passed

    def test_p4(self):
        assert contract_p4(20_000, np.random.default_rng(2), reach=200).passed

    def test_p56(self):
        assert contract_p56(20_000, np.random.default_rng(3)).passed

    def test_p0(self):
        assert contract_p0(10_000, np.random.default_rng(4)).passed

    def test_no_long_runs(self):
        assert prop_no_long_runs(2000, np.random.default_rng(6)).passed

    def test_return_map(self):
        assert return_map(500, np.random.default_rng(7)).passed


def _near_diagonal_ratio(window, n=50_000, seed=11):
    rng = np.random.default_rng(seed)
    dev = rng.uniform(0, window, n)
    th = np.pi / 4 - dev
    rho = rng.uniform(1e-3, 1.0, n)
    x, y = rho * np.cos(th), rho * np.sin(th)
    nx, ny = dr_step_2d_array(x, y)
    ratio = ((nx - ALPHA) ** 2 + (ny - ALPHA) ** 2) / ((x - ALPHA) ** 2 + (y - ALPHA) ** 2)
    return dev, ratio


def test_ratio_tends_to_half_on_the_diagonal():
    dev, ratio = _near_diagonal_ratio(1e-6)
    assert np.all(ratio >= 0.5 - 1e-6) and np.all(ratio <= 0.5 + 1e-12)


def test_ratio_gap_is_linear_in_angle():
    # the shortfall from 1/2 scales like the angular distance to the diagonal
    dev, ratio = _near_diagonal_ratio(1e-4)
    assert np.all(0.5 - ratio <= 1.01 * dev + 1e-12)
    assert (0.5 - ratio).max() > 5e-5
