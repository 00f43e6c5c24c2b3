import math

import pytest

from nleig.core import ProblemParams, analyze
from nleig.critical import alpha_zero, dual_quotient_min, lower_bound, rescale_lambda
from nleig.solver import SolverOptions, minimize, saturation_reference

PI2 = math.pi**2
OPTS = SolverOptions()


# --- alpha_critical -----------------------------------------------------------

def test_critical_coupling_q1(crit):
    res = crit(1.0)
    assert abs(res.alpha_q - PI2 / 2) <= 1e-2 * PI2 / 2
    assert res.bracket[0] <= res.alpha_q <= res.bracket[1]
    assert res.bracket[1] - res.bracket[0] <= res.tolerance


def test_critical_coupling_q2(crit):
    res = crit(2.0)
    assert abs(res.alpha_q - 0.75 * PI2) <= 1e-2 * 0.75 * PI2


def test_critical_coupling_q15_lands_in_the_theory_window(crit):
    res = crit(1.5)
    assert lower_bound(1.5) <= res.alpha_q <= 2 * PI2


@pytest.mark.parametrize("q", [1.25, 1.5, 1.75])
def test_lower_bound_respected(crit, q):
    assert crit(q).alpha_q >= lower_bound(q) - 0.04


def test_lower_bound_attained_at_q2(crit):
    assert abs(crit(2.0).alpha_q - lower_bound(2.0)) <= 0.04 + 1e-6


def test_threshold_dichotomy(crit):
    q = 1.5
    aq = crit(q).alpha_q
    sat = saturation_reference(OPTS.n, q)
    delta = 10.0 * abs(sat - PI2) + 1e-8
    below = minimize(ProblemParams(aq - 0.5, q), OPTS)
    assert analyze(below.minimizer).sign_class != "sign_changing"
    assert below.lam < PI2 - delta
    above = minimize(ProblemParams(aq + 0.5, q), OPTS)
    prof = analyze(above.minimizer)
    assert abs(above.q_average) < 1e-6
    assert prof.odd_defect < 1e-3


@pytest.mark.parametrize("q", [1.0, 1.5, 2.0])
def test_branch_coexistence_at_threshold(crit, q):
    aq = crit(q).alpha_q
    res_pos = minimize(ProblemParams(aq, q), SolverOptions(starts=("positive_bump",)))
    res_odd = minimize(ProblemParams(aq, q), SolverOptions(starts=("odd_sine",)))
    assert abs(res_pos.lam - res_odd.lam) <= 10 * 0.04 * PI2


def test_alpha_critical_rejects_loose_inputs():
    from nleig.critical import alpha_critical

    with pytest.raises(ValueError):
        alpha_critical(1.5, 1e-5, OPTS)
    with pytest.raises(ValueError):
        alpha_critical(2.5, 0.04, OPTS)


# --- alpha_zero and duality -----------------------------------------------------

def test_zero_crossing_q2_matches_poincare_shift():
    # on the q = 2 constant-sign branch lambda = pi^2/4 + alpha, so the zero
    # crossing sits at -pi^2/4
    a0 = alpha_zero(2.0, 1e-3, OPTS)
    assert abs(a0 + PI2 / 4) <= 1e-3 * PI2 / 4


def test_zero_crossing_q1_matches_parabola_oracle():
    # the dual quotient at q = 1 is minimized by 1 - x^2, giving exactly 3/2
    a0 = alpha_zero(1.0, 1e-3, OPTS)
    assert abs(a0 + 1.5) <= 1e-3 * 1.5


@pytest.mark.parametrize("q", [1.0, 1.5])
def test_zero_crossing_root_quality(q):
    tol = 1e-3
    a0 = alpha_zero(q, tol, OPTS)
    assert a0 < 0.0
    lam = minimize(ProblemParams(a0, q), OPTS).lam
    assert -tol < lam < tol


def test_dual_quotient_minimizer_has_constant_sign():
    for q in (1.0, 1.5, 2.0):
        tau, w = dual_quotient_min(q, OPTS)
        assert tau > 0.0
        assert analyze(w).sign_class != "sign_changing"


def test_dual_quotient_q2_is_poincare():
    tau, _ = dual_quotient_min(2.0, OPTS)
    assert abs(tau - PI2 / 4) <= 1e-6 * PI2 / 4


# --- rescaling -------------------------------------------------------------------

def test_rescale_identity_on_reference_interval():
    lam = minimize(ProblemParams(1.0, 2.0), OPTS).lam
    assert rescale_lambda(-1.0, 1.0, 1.0, 2.0, OPTS) == lam


def test_rescale_translation_invariance():
    lam = minimize(ProblemParams(1.5, 1.5), OPTS).lam
    assert rescale_lambda(0.0, 2.0, 1.5, 1.5, OPTS) == lam


def test_rescale_against_direct_solve():
    rescaled = rescale_lambda(-2.0, 2.0, 1.0, 2.0, OPTS)
    direct = minimize(ProblemParams(1.0, 2.0, interval=(-2.0, 2.0)), OPTS).lam
    assert abs(direct - rescaled) <= 1e-3 * abs(rescaled)
    expected = 0.25 * (PI2 / 4 + 4.0)
    assert abs(rescaled - expected) <= 1e-4 * expected


def test_rescale_rejects_unordered_interval():
    with pytest.raises(ValueError):
        rescale_lambda(2.0, -2.0, 1.0, 2.0, OPTS)
