import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nleig.period import (
    first_integral_coeffs,
    half_period,
    integrand,
    log_bound_offset,
    monotonicity_gap,
    neg_arc_radical,
    offset_positivity_margin,
    pos_arc_radical,
)

PI = math.pi
MS = [k / 10 for k in range(1, 10)]
YS = [k / 20 for k in range(1, 20)]


# --- first integral coefficients ----------------------------------------------

def test_coeffs_at_unit_depth():
    co = first_integral_coeffs(1.0, 1.7)
    assert co.z == 0.0
    assert co.t == 1.0


def test_coeffs_at_zero_depth():
    co = first_integral_coeffs(0.0, 1.3)
    assert co.z == 1.0
    assert co.t == 0.0


def test_coeffs_half_depth_q2():
    co = first_integral_coeffs(0.5, 2.0)
    assert abs(co.z - 0.6) < 1e-15
    assert abs(co.t - 0.4) < 1e-15


@settings(max_examples=50, deadline=None)
@given(m=st.floats(0.0, 1.0), q=st.floats(1.0, 2.0))
def test_coeffs_partition_of_unity(m, q):
    co = first_integral_coeffs(m, q)
    assert co.z + co.t == 1.0  # t is defined as the exact complement
    assert 0.0 <= co.z <= 1.0
    assert (co.z == 0.0) == (m == 1.0)


def test_coeffs_range_validation():
    with pytest.raises(ValueError):
        first_integral_coeffs(-0.1, 1.5)
    with pytest.raises(ValueError):
        first_integral_coeffs(0.5, 2.3)


# --- integrand ----------------------------------------------------------------

def test_integrand_at_unit_depth_is_circular():
    # collapses to 2/sqrt(1-y^2), independent of q
    for q in (1.0, 1.4, 2.0):
        assert abs(integrand(1.0, q, 0.6) - 2.5) < 1e-14


def test_integrand_at_zero_height():
    m, q = 0.5, 2.0
    z = first_integral_coeffs(m, q).z
    expected = (1 + m) / math.sqrt(1 - z)
    assert abs(integrand(m, q, 0.0) - expected) < 1e-14
    assert abs(expected - 2.3717082451262845) < 1e-12


def test_integrand_increases_with_exponent_at_origin():
    assert integrand(0.5, 2.0, 0.0) > integrand(0.5, 1.0, 0.0)


def test_integrand_strictly_increasing_in_q_on_grid():
    qs = (1.0, 1.25, 1.5, 1.75, 2.0)
    for m in MS:
        for y in YS:
            vals = [integrand(m, q, y) for q in qs]
            assert all(b > a for a, b in zip(vals, vals[1:])), (m, y)


def test_arc_radical_bounds_on_grid():
    for m in MS:
        for q in (1.0, 1.5, 2.0):
            for y in YS:
                circ = math.sqrt(1.0 - y * y)
                assert pos_arc_radical(m, q, y) <= circ + 1e-15
                assert neg_arc_radical(m, q, y) >= m * circ - 1e-15


def test_arc_radical_domain_guard():
    with pytest.raises(ValueError, match="domain violation"):
        pos_arc_radical(0.5, 1.5, 1.2)


def test_integrand_rejects_height_out_of_range():
    with pytest.raises(ValueError):
        integrand(0.5, 1.5, -0.2)


# --- half period ---------------------------------------------------------------

def test_half_period_is_pi_on_the_q1_line():
    for m in (0.0, 0.25, 0.5, 0.75, 1.0):
        hv = half_period(m, 1.0)
        assert abs(hv.value - PI) <= 1e-9 * PI


def test_half_period_is_pi_at_unit_depth():
    for q in (1.0, 1.5, 2.0):
        hv = half_period(1.0, q)
        assert abs(hv.value - PI) <= 1e-9 * PI


def test_half_period_q2_closed_form():
    for m in [k / 10 for k in range(1, 11)]:
        closed = 0.5 * PI * math.sqrt((1 + m * m) / 2) * (1 / m + 1)
        hv = half_period(m, 2.0)
        assert abs(hv.value - closed) <= 1e-8 * closed


def test_half_period_zero_depth_closed_form():
    for q in (1.0, 1.25, 1.5, 1.75):
        closed = PI / (2 - q)
        hv = half_period(0.0, q)
        assert abs(hv.value - closed) <= 1e-8 * closed
    assert abs(half_period(0.0, 1.5).value - 2 * PI) <= 1e-9 * 2 * PI


def test_half_period_divergent_case():
    with pytest.raises(ValueError, match="divergent"):
        half_period(0.0, 2.0)


def test_half_period_exceeds_pi_with_margin():
    for m in MS:
        for q in (1.25, 1.5, 1.75, 2.0):
            hv = half_period(m, q)
            assert hv.value - PI > 10 * hv.error_estimate, (m, q)


def test_half_period_value_vs_error_invariant():
    for m, q in ((0.3, 1.0), (1.0, 1.8), (0.6, 1.4)):
        hv = half_period(m, q)
        assert hv.value >= PI - hv.error_estimate


# --- monotonicity study functions ----------------------------------------------

def test_gap_vanishes_at_top():
    for m in (0.3, 0.7):
        for q in (1.2, 1.9):
            assert abs(monotonicity_gap(m, q, 1.0)) <= 1e-12


def test_gap_positive_inside():
    assert monotonicity_gap(0.5, 1.5, 0.5) > 0.0


def test_gap_strictly_decreasing_in_height():
    ys = [k / 101 for k in range(1, 101)]
    vals = [monotonicity_gap(0.5, 1.5, y) for y in ys]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_offset_exceeds_one():
    assert log_bound_offset(0.5, 1.5) > 1.0
    assert log_bound_offset(0.5, 2.0) == math.inf  # degenerate denominator


def test_margin_positive_and_vanishing_at_full_depth():
    samples = [offset_positivity_margin(m, 1.5) for m in (0.5, 0.9, 0.99, 0.999)]
    assert all(v > 0.0 for v in samples)
    assert all(b < a for a, b in zip(samples, samples[1:]))


def test_study_functions_reject_degenerate_depth():
    for fn in (lambda m: monotonicity_gap(m, 1.5, 0.5), lambda m: log_bound_offset(m, 1.5),
               lambda m: offset_positivity_margin(m, 1.5)):
        with pytest.raises(ValueError):
            fn(0.0)
        with pytest.raises(ValueError):
            fn(1.0)
