import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fblgeom.numerics import DomainError, integrate_adaptive
from fblgeom.outage import (CodeParams, Method, OutageEstimate, ScenarioMismatchError,
                            UndefinedMetricError, _ss_gamma_form, approximation_error,
                            conditional_error, derive_code_params, dispersion, error_support,
                            linearized_kernel, outage, outage_closed_micro_op, outage_closed_ss,
                            outage_closed_ss_alpha4, outage_exact, outage_linearized,
                            select_method)
from fblgeom.sinr import SinrParams, sinr_pdf

# Frozen from tests/oracles/compute_oracles.py (mpmath quad at 30 digits).
THETA = 0.071773462536293164
BETA = 14.630931654997213
UPSILON = 0.15743541263414829
RHO = -0.013888487561561966
DISPERSION_1 = 1.5610267357542058
COND_ERROR_Z02 = 0.0019190114377404999

ORACLE = {
    # name: (params, n, r, exact, linearized)
    "pure_noise": (SinrParams(4, 0.0, eta=1.0), 200, 0.1,
                   0.073467938097955451, 0.068685125076785352),
    "dsa_wp14": (SinrParams(4, 1e-2, w_p=1.4), 200, 0.1,
                 0.015768072887975882, 0.014070579748689268),
    "dsa_n500": (SinrParams(4, 1e-2), 500, 0.1, 0.013219200280530548, 0.012775965580834747),
    "dsa_alpha3": (SinrParams(3, 1e-2), 200, 0.1, 0.013414544652599017, 0.012117660424207313),
    "dsa_l1e3": (SinrParams(4, 1e-3), 200, 0.1, 0.0013427035922337529, 0.0011986581451862954),
    "dsa_l1": (SinrParams(4, 1.0), 200, 0.1, 0.73106906533586315, 0.63969208720303173),
    "uo_l1e4": (SinrParams(4, 1e-4, eta=1e-3), 200, 0.1,
                0.00021106992147214023, 0.00019226631597975987),
    "uo_l1e2": (SinrParams(4, 1e-2, eta=1e-3), 200, 0.1,
                0.01341902403340642, 0.011978973629771894),
    "uo_l0": (SinrParams(4, 0.0, eta=1e-3), 200, 0.1,
              7.6726559586260139e-5, 7.2332606389283655e-5),
    "alpha25_r03": (SinrParams(2.5, 1e-2, eta=1e-3), 300, 0.3,
                    0.041336207319069329, 0.040573247983976746),
}

C200 = derive_code_params(200, r=0.1)


def kernel_average(p: SinrParams, c: CodeParams) -> float:
    """Integral of the ramp kernel against the density, done directly in z."""
    lo = c.rho_clamped
    head = integrate_adaptive(lambda z: sinr_pdf(p, np.maximum(z, 1e-300)), 0.0, lo,
                              abs_tol=1e-14, rel_tol=1e-12).value if lo > 0 else 0.0
    body = integrate_adaptive(lambda z: linearized_kernel(z, c) * sinr_pdf(p, np.maximum(z, 1e-300)),
                              lo, c.upsilon, abs_tol=1e-14, rel_tol=1e-12, points=[c.theta]).value
    return head + body


class TestCodeParams:
    def test_reference_constants(self):
        c = derive_code_params(200, r=0.1)
        assert c.theta == pytest.approx(THETA, rel=1e-14)
        assert c.beta == pytest.approx(BETA, rel=1e-14)
        assert c.upsilon == pytest.approx(UPSILON, rel=1e-13)
        assert c.rho == pytest.approx(RHO, rel=1e-11)
        assert c.theta == pytest.approx(0.0717735, abs=1e-7)
        assert c.beta == pytest.approx(14.6309, abs=1e-4)
        assert c.upsilon == pytest.approx(0.157435, abs=1e-6)
        assert c.rho < 0 and c.rho_clamped == 0.0

    def test_from_bits(self):
        c = derive_code_params(200, k=20)
        assert c.r == 0.1 and c.k == 20
        assert c.theta == C200.theta and c.beta == C200.beta

    @settings(max_examples=100)
    @given(st.integers(1, 100_000), st.floats(1e-3, 8))
    def test_window_identity(self, n, r):
        c = derive_code_params(n, r=r)
        assert c.upsilon - c.rho == pytest.approx(math.sqrt(2 * math.pi) / c.beta, abs=1e-12)
        assert c.upsilon > c.theta > c.rho

    @pytest.mark.parametrize("kw", [dict(n=0, r=0.1), dict(n=100, r=0.0), dict(n=100, r=-1),
                                    dict(n=100, k=0), dict(n=100), dict(n=100, k=10, r=0.2)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            derive_code_params(**kw)

    def test_error_support(self):
        z = error_support(C200, 1e-9)
        assert conditional_error(z, C200) == pytest.approx(1e-9, rel=1e-8)


class TestDispersion:
    def test_zero(self):
        assert dispersion(0.0) == 0.0

    def test_one(self):
        assert dispersion(1.0) == pytest.approx(DISPERSION_1, rel=1e-14)

    def test_saturation(self):
        assert dispersion(1e9) == pytest.approx(1 / math.log(2) ** 2, abs=1e-8)

    def test_monotone(self):
        assert np.all(np.diff(dispersion(np.logspace(-6, 6, 500))) > 0)


class TestConditionalError:
    def test_half_at_threshold(self):
        for c in (C200, derive_code_params(500, r=0.3), derive_code_params(37, k=11)):
            assert conditional_error(c.theta, c) == 0.5

    def test_one_at_zero(self):
        assert conditional_error(0.0, C200) == 1.0

    def test_reference_point(self):
        # Q(sqrt(200) (log2 1.2 - 0.1) / sqrt(V(0.2))) evaluated at 30 digits.
        assert conditional_error(0.2, C200) == pytest.approx(COND_ERROR_Z02, rel=1e-12)

    def test_limit_near_zero(self):
        assert conditional_error(1e-12, C200) == pytest.approx(1.0, abs=1e-12)

    def test_decreasing(self):
        z = np.linspace(0, 1, 1001)
        assert np.all(np.diff(conditional_error(z, C200)) <= 0)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            conditional_error(-0.1, C200)


class TestLinearizedKernel:
    def test_center(self):
        assert linearized_kernel(C200.theta, C200) == 0.5

    def test_upper_breakpoint(self):
        assert linearized_kernel(C200.upsilon, C200) == 0.0

    def test_midpoint(self):
        z = 0.5 * (C200.theta + C200.upsilon)
        assert linearized_kernel(z, C200) == pytest.approx(0.25, abs=1e-14)

    def test_continuous_at_breakpoints(self):
        c = derive_code_params(1000, r=0.5)
        assert c.rho > 0
        eps = 1e-12
        assert linearized_kernel(c.rho + eps, c) == pytest.approx(1.0, abs=1e-9)
        assert linearized_kernel(c.upsilon - eps, c) == pytest.approx(0.0, abs=1e-9)

    def test_dominance(self):
        z = np.linspace(0, 1, 5001)
        gap = np.abs(linearized_kernel(z, C200) - conditional_error(z, C200))
        assert gap.max() <= 0.5


class TestExact:
    @pytest.mark.parametrize("name", sorted(ORACLE))
    def test_against_oracle(self, name):
        p, n, r, exact, _ = ORACLE[name]
        est = outage_exact(p, derive_code_params(n, r=r))
        assert est.method is Method.EXACT
        assert est.value == pytest.approx(exact, rel=1e-7)

    def test_degenerate(self):
        assert outage_exact(SinrParams(4, 0.0), C200).value == 0.0

    def test_error_bound_reported(self):
        est = outage_exact(SinrParams(4, 1e-2), C200)
        assert 0 < est.error_bound < 1e-8

    @settings(max_examples=50, deadline=None)
    @given(st.floats(-6, 0), st.floats(0.05, 2.0), st.floats(0, 1e-2))
    def test_nondecreasing_in_lambda(self, log_lam, factor, xi):
        lam = 10 ** log_lam
        a = outage_exact(SinrParams(4, lam, eta=xi), C200).value
        b = outage_exact(SinrParams(4, lam * (1 + factor), eta=xi), C200).value
        assert b >= a * (1 - 1e-8)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.02, 1.5), st.floats(0.01, 0.5), st.floats(-5, -1))
    def test_nondecreasing_in_rate(self, r, dr, log_lam):
        p = SinrParams(4, 10 ** log_lam)
        a = outage_exact(p, derive_code_params(200, r=r)).value
        b = outage_exact(p, derive_code_params(200, r=r + dr)).value
        assert b >= a * (1 - 1e-8)

    @pytest.mark.parametrize("k", [20, 50, 100])
    def test_nonincreasing_in_n_at_fixed_k(self, k):
        p = SinrParams(4, 1e-2, w_p=1.4)
        vals = [outage_exact(p, derive_code_params(n, k=k)).value for n in (100, 200, 500, 1000)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))


class TestLinearized:
    @pytest.mark.parametrize("name", sorted(ORACLE))
    def test_against_oracle(self, name):
        p, n, r, _, lin = ORACLE[name]
        est = outage_linearized(p, derive_code_params(n, r=r))
        assert est.value == pytest.approx(lin, rel=1e-9)

    @pytest.mark.parametrize("name", ["dsa_wp14", "uo_l1e4", "alpha25_r03", "pure_noise"])
    def test_equals_kernel_average(self, name):
        p, n, r, _, _ = ORACLE[name]
        c = derive_code_params(n, r=r)
        assert outage_linearized(p, c).value == pytest.approx(kernel_average(p, c), abs=1e-9)

    def test_clamped_flag(self):
        assert outage_linearized(SinrParams(4, 1e-2), C200).clamped_rho
        c = derive_code_params(1000, r=0.5)
        assert not outage_linearized(SinrParams(4, 1e-2), c).clamped_rho

    def test_pure_noise_within_four_percent(self):
        # Fails: the ramp is sqrt(2 pi) shallower than the error curve at
        # theta, and at n = 200 that leaves a 6.5% gap in this case.
        p = SinrParams(4, 0.0, eta=1.0)
        exact, lin = outage_exact(p, C200), outage_linearized(p, C200)
        assert approximation_error(exact, lin) <= 4e-2

    def test_dense_n500_within_one_percent(self):
        # Fails: the relative gap at n = 500 is 3.4%, inside 4% but not 1%.
        p = SinrParams(4, 1e-2)
        c = derive_code_params(500, r=0.1)
        assert approximation_error(outage_exact(p, c), outage_linearized(p, c)) <= 1e-2


class TestClosedSS:
    def test_vanishing_density(self):
        assert outage_closed_ss(SinrParams(4, 1e-12), C200).value == pytest.approx(0.0, abs=1e-11)

    @pytest.mark.parametrize("alpha", [4.0, 3.0, 2.5, 5.0])
    def test_matches_linearized(self, alpha):
        p = SinrParams(alpha, 1e-2)
        assert outage_closed_ss(p, C200).value == pytest.approx(
            outage_linearized(p, C200).value, abs=1e-6)

    def test_against_oracle_alpha3(self):
        p, n, r, _, lin = ORACLE["dsa_alpha3"]
        assert outage_closed_ss(p, derive_code_params(n, r=r)).value == pytest.approx(lin, rel=1e-12)

    def test_noise_rejected(self):
        with pytest.raises(ScenarioMismatchError):
            outage_closed_ss(SinrParams(4, 1e-2, eta=1e-3), C200)

    def test_printed_gamma_form_agrees_at_moderate_density(self):
        # Same algebra; the gamma form already sheds digits at 1e-3.
        for lam in (1e-3, 1e-2, 1e-1, 1.0):
            p = SinrParams(4, lam)
            assert _ss_gamma_form(p, C200) == pytest.approx(outage_closed_ss(p, C200).value, abs=1e-8)

    def test_printed_gamma_form_cancels_at_low_density(self):
        # The incomplete-gamma presentation subtracts two terms of size ~1;
        # at lambda = 1e-12 the true value is ~1e-12 and the form is garbage.
        p = SinrParams(4, 1e-12)
        stable = outage_closed_ss(p, C200).value
        assert stable == pytest.approx(1.4193e-12, rel=1e-3)
        assert abs(_ss_gamma_form(p, C200) - stable) > 1e-6

    @pytest.mark.parametrize("alpha", [2.1, 2.5, 3.0, 4.0, 6.0])
    @pytest.mark.parametrize("lam", [1e-12, 1e-6, 1e-2, 1.0, 100.0])
    def test_finite_and_bounded(self, alpha, lam):
        v = outage_closed_ss(SinrParams(alpha, lam), C200).value
        assert 0.0 <= v <= 1.0 and math.isfinite(v)


class TestClosedSSAlpha4:
    def test_consistent_with_general(self):
        p = SinrParams(4, 1e-2)
        assert outage_closed_ss_alpha4(p, C200).value == pytest.approx(
            outage_closed_ss(p, C200).value, abs=1e-9)

    @pytest.mark.parametrize("name", ["dsa_l1e3", "dsa_l1", "dsa_wp14"])
    def test_against_linearized(self, name):
        p, n, r, _, lin = ORACLE[name]
        c = derive_code_params(n, r=r)
        v = outage_closed_ss_alpha4(p, c).value
        assert v == pytest.approx(outage_linearized(p, c).value, abs=1e-6)
        assert v == pytest.approx(lin, abs=1e-12)

    @pytest.mark.parametrize("p", [SinrParams(3, 1e-2), SinrParams(4, 1e-2, eta=1e-3)])
    def test_scenario_mismatch(self, p):
        with pytest.raises(ScenarioMismatchError):
            outage_closed_ss_alpha4(p, C200)

    @given(st.floats(-12, 3))
    def test_series_and_closed_branches_agree(self, log_lam):
        p = SinrParams(4, 10 ** log_lam)
        for c in (C200, derive_code_params(1000, r=0.5)):
            assert outage_closed_ss_alpha4(p, c).value == pytest.approx(
                outage_closed_ss(p, c).value, rel=1e-9, abs=1e-15)


class TestClosedMicroOp:
    @pytest.mark.parametrize("name", ["uo_l0", "uo_l1e4", "uo_l1e2"])
    def test_against_linearized(self, name):
        p, n, r, _, lin = ORACLE[name]
        c = derive_code_params(n, r=r)
        v = outage_closed_micro_op(p, c).value
        assert v == pytest.approx(outage_linearized(p, c).value, abs=1e-6)
        # The erfcx form subtracts terms of size 1/xi, which costs a few digits.
        assert v == pytest.approx(lin, abs=1e-10)

    def test_ultra_reliable_point(self):
        assert outage_closed_micro_op(SinrParams(4, 1e-4, eta=1e-3), C200).value <= 1e-3

    @pytest.mark.parametrize("p", [SinrParams(3, 1e-2, eta=1e-3), SinrParams(4, 1e-2)])
    def test_scenario_mismatch(self, p):
        with pytest.raises(ScenarioMismatchError):
            outage_closed_micro_op(p, C200)

    @pytest.mark.parametrize("lam", [0.0, 1e-8, 1e-4, 1e-2, 1.0, 10.0])
    @pytest.mark.parametrize("xi", [1e-6, 1e-3, 1.0, 50.0])
    def test_grid_against_linearized(self, lam, xi):
        p = SinrParams(4, lam, eta=xi)
        for c in (C200, derive_code_params(1000, r=0.5)):
            v = outage_closed_micro_op(p, c).value
            assert 0.0 <= v <= 1.0
            assert v == pytest.approx(outage_linearized(p, c).value, abs=1e-6)


class TestApproximationError:
    def test_identical(self):
        e = OutageEstimate(0.02, Method.EXACT)
        assert approximation_error(e, e) == 0.0

    def test_four_percent(self):
        assert approximation_error(OutageEstimate(0.02, Method.EXACT),
                                   OutageEstimate(0.0208, Method.LINEARIZED)) == pytest.approx(0.04, rel=1e-12)

    def test_zero_reference(self):
        with pytest.raises(UndefinedMetricError):
            approximation_error(OutageEstimate(0.0, Method.EXACT), OutageEstimate(0.1, Method.EXACT))

    def test_micro_op_low_density(self):
        # Blocklength 500 and rate 0.1, as in the approximation-accuracy study.
        p = SinrParams(4, 1e-6, eta=1e-3)
        c = derive_code_params(500, r=0.1)
        assert approximation_error(outage_exact(p, c), outage_linearized(p, c)) <= 0.04


class TestEstimateAndDispatch:
    def test_value_bounds_enforced(self):
        with pytest.raises(DomainError):
            OutageEstimate(1.5, Method.EXACT)
        with pytest.raises(DomainError):
            OutageEstimate(0.5, Method.EXACT, error_bound=-1)

    @pytest.mark.parametrize("p,method", [
        (SinrParams(4, 1e-2), Method.CLOSED_SS_ALPHA4),
        (SinrParams(3, 1e-2), Method.CLOSED_SS),
        (SinrParams(4, 1e-2, eta=1e-3), Method.CLOSED_MICRO_OP),
        (SinrParams(3, 1e-2, eta=1e-3), Method.LINEARIZED),
    ])
    def test_select_method(self, p, method):
        assert select_method(p) is method
        assert outage(p, C200).method is method
        assert outage(p, C200, "auto").method is method

    def test_forced_method(self):
        p = SinrParams(4, 1e-2)
        assert outage(p, C200, "exact").method is Method.EXACT
        assert outage(p, C200, Method.LINEARIZED).method is Method.LINEARIZED

    def test_monte_carlo_not_dispatched(self):
        with pytest.raises(DomainError):
            outage(SinrParams(4, 1e-2), C200, "monte_carlo")
