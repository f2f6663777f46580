"""Tests for the error-bound constants and their assembly."""

import numpy as np
import pytest

from pfbounds.core import (
    DegenerateGradientError,
    DiscretizationTag,
    DomainError,
    LinearGaussianLsf,
    OdeScheme,
    StepSizeTooLargeError,
    make_ode_lsf,
    std_normal_cdf,
    std_normal_pdf,
)
from pfbounds.reliability import (
    BoundReport,
    DiscretizationSpec,
    FormResult,
    assemble_bounds,
    c1,
    c2,
    c21,
    c21_sharp,
    c22,
    c4,
    estimate_c3,
    estimate_c_fe,
    find_mlfp,
    linear_case_bound,
    lipschitz_bound,
    quadrature_pf,
)

LOG40 = np.log(40.0)


def spec(h, s=1.0, c_fe=1.0):
    return DiscretizationSpec(h=h, s=s, c_fe=c_fe)


class TestC1:
    def test_values(self):
        assert c1(1.0, spec(0.1, c_fe=1.0)) == 2.0
        assert c1(0.5, spec(0.1, c_fe=3.0)) == 3.0

    def test_one_sided(self):
        assert c1(0.5, spec(0.1, c_fe=3.0), one_sided=True) == 1.5

    def test_positive_constant(self):
        with pytest.raises(DomainError):
            c1(0.0, spec(0.1))


class TestC21:
    def test_substitution(self):
        assert c21(1.0, 1.0, 1.0) == pytest.approx(4.0)
        assert c21(2.0, 1.0, 1.0) == pytest.approx(3.125)

    def test_small_variance_is_larger(self):
        beta = 2.0
        values = [c21(beta * np.sqrt(s2), np.sqrt(s2), 1.0) for s2 in (10.0, 1.0, 0.1)]
        # Same P_f = Phi(-2) for every variance
        assert values[0] < values[1] < values[2]

    def test_diverges_at_zero(self):
        assert c21(1e-3, 1.0, 1.0) > 1e8

    @pytest.mark.parametrize("beta", [0.0, -1.0])
    def test_domain(self, beta):
        with pytest.raises(DomainError):
            c21(beta, 1.0, 1.0)


class TestC21Sharp:
    def test_value_at_four(self):
        assert c21_sharp(4.0, 1.0, 1.0) == pytest.approx(4.3536, rel=1e-4)

    def test_finite_limit_at_zero(self):
        assert c21_sharp(1e-10, 1.0, 1.0) == pytest.approx(1.0, rel=1e-6)

    def test_not_above_c21(self):
        for beta in np.linspace(1.0, 10.0, 46):
            assert c21_sharp(beta, 1.0, 1.0) <= c21(beta, 1.0, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            c21_sharp(1.0, -1.0, 1.0)


@pytest.mark.parametrize("sigma", [0.3, 1.0, 3.0])
def test_lipschitz_sandwich(sigma):
    for beta in np.linspace(0.1, 8.0, 80):
        density = std_normal_pdf(beta / sigma) / sigma
        tail = std_normal_cdf(-beta / sigma)
        assert density <= c21(beta, sigma, 1.0) * tail * (1.0 + 1e-12)
        assert density <= c21_sharp(beta, sigma, 1.0) * tail * (1.0 + 1e-12)


class TestC22:
    def test_limit_is_c21(self):
        value = c22(4.0, 1.0, spec(2.0**-20))
        assert value == pytest.approx(c21(4.0, 1.0, 1.0), rel=1e-4)

    @pytest.mark.parametrize("c_fe", [0.1, 1.0, 10.0])
    def test_flat_for_small_h(self, c_fe):
        for h in np.logspace(-6, -3, 7):
            assert c22(4.0, 1.0, spec(h, 1.0, c_fe)) / c21(4.0, 1.0, c_fe) <= 1.05

    @pytest.mark.parametrize("c_fe", [0.1, 1.0])
    def test_flat_below_tenth_for_order_two(self, c_fe):
        assert c22(4.0, 1.0, spec(0.1, 2.0, c_fe)) / c21(4.0, 1.0, c_fe) <= 1.05

    def test_rises_for_large_h(self):
        assert c22(4.0, 1.0, spec(0.1, 1.0, 10.0)) / c21(4.0, 1.0, 10.0) > 2.0

    def test_non_decreasing_in_h(self):
        hs = np.logspace(-6, np.log10(0.39), 40)
        values = [c22(4.0, 1.0, spec(h, 1.0, 10.0)) for h in hs]
        assert np.all(np.diff(values) >= 0.0)

    def test_h_too_large(self):
        with pytest.raises(StepSizeTooLargeError, match="need h < 0.1"):
            c22(1.0, 1.0, spec(0.5, 1.0, 10.0))

    def test_additivity(self):
        s = spec(1e-2, 1.0, 2.0)
        assert c2(3.0, 1.0, s) == c21(3.0, 1.0, 2.0) + c22(3.0, 1.0, s)

    def test_c2_limit(self):
        assert c2(3.0, 1.0, spec(2.0**-30)) == pytest.approx(2.0 * c21(3.0, 1.0, 1.0), rel=1e-6)


class TestC4:
    def test_small_n(self):
        assert c4(1) == 1.0
        assert c4(2) == pytest.approx(1.0 + np.pi / 2.0, abs=1e-12)

    def test_increasing(self):
        values = [c4(n) for n in range(1, 1001)]
        assert np.all(np.diff(values) > 0.0)

    def test_square_root_growth(self):
        for n in [16, 50, 100, 1000, 10_000]:
            assert 1.0 <= c4(n) / np.sqrt(n) <= 1.5

    def test_large_n_finite(self):
        assert np.isfinite(c4(100_000))

    @pytest.mark.parametrize("n", [0, -3, 2.5])
    def test_domain(self, n):
        with pytest.raises(DomainError):
            c4(n)


class TestLinearCase:
    def test_lipschitz_bound(self):
        assert lipschitz_bound(4.0, 1.0) == pytest.approx(c21(4.0, 1.0, 1.0) * std_normal_cdf(-4.0))

    @pytest.mark.parametrize("sharp", [False, True])
    def test_bounds_shifted_probability(self, sharp):
        beta, h = 4.0, 1e-3
        s = spec(h, 1.0, 1.0)
        error = std_normal_cdf(-(beta - h)) - std_normal_cdf(-beta)
        assert linear_case_bound(beta, 1.0, s, sharp=sharp) >= error
        assert linear_case_bound(beta, 1.0, s, sharp=sharp, one_sided=True) >= error


class TestEstimateC3:
    def test_linear_pair(self):
        alpha = np.array([1.0, 2.0, 2.0])
        delta, h = 0.05, 0.01
        exact = LinearGaussianLsf(alpha, 4.0)
        approx = LinearGaussianLsf(alpha, 4.0 - delta, tag=DiscretizationTag(h=h, s=1.0))
        form_h = find_mlfp(approx)
        assert estimate_c3(exact, approx, form_h.mlfp) == pytest.approx(delta / (h * 3.0), rel=1e-10)

    def test_declared_c_fe_is_used(self):
        alpha = np.array([1.0, 0.0])
        exact = LinearGaussianLsf(alpha, 4.0)
        approx = LinearGaussianLsf(alpha, 3.9, tag=DiscretizationTag(h=0.1, s=1.0, c_fe=7.0))
        assert estimate_c3(exact, approx, [-3.9, 0.0]) == pytest.approx(7.0)

    def test_c_fe_probe_includes_extra_points(self):
        exact = make_ode_lsf(None, 40.0)
        approx = make_ode_lsf(OdeScheme.at_level("explicit-euler", 4), 40.0)
        plain = estimate_c_fe(exact, approx, approx.tag.h, 1.0)
        augmented = estimate_c_fe(exact, approx, approx.tag.h, 1.0, extra_points=[[-4.2]])
        assert augmented > plain

    def test_degenerate_gradient(self):
        exact = LinearGaussianLsf([0.0, 0.0], 1.0)
        approx = LinearGaussianLsf([1.0, 0.0], 1.0, tag=DiscretizationTag(h=0.1, s=1.0))
        with pytest.raises(DegenerateGradientError):
            estimate_c3(exact, approx, [0.0, 0.0])

    def test_approximation_must_be_tagged(self):
        exact = LinearGaussianLsf([1.0], 1.0)
        with pytest.raises(DomainError):
            estimate_c3(exact, exact, [-1.0])

    def test_nu_h_range(self):
        exact = LinearGaussianLsf([1.0], 1.0)
        approx = LinearGaussianLsf([1.0], 0.9, tag=DiscretizationTag(h=0.1, s=1.0))
        with pytest.raises(DomainError):
            estimate_c3(exact, approx, [-0.9], nu_h=1.5)


class TestAssembleBounds:
    def form(self, beta):
        return FormResult.from_point(np.array([-beta]), 3, True, 0.0)

    def test_report_consistency(self):
        report = assemble_bounds(self.form(4.0), spec(1e-3), 2.0, 10)
        assert isinstance(report, BoundReport)
        assert report.bound_abs == pytest.approx(report.c2 * report.c4 * 1e-3 * report.p_form_h, rel=1e-12)
        assert report.c2 == pytest.approx(report.c21 + report.c22)

    def test_c3_monotone(self):
        low = assemble_bounds(self.form(4.0), spec(1e-3), 1.0, 1)
        high = assemble_bounds(self.form(4.0), spec(1e-3), 2.0, 1)
        assert high.bound_abs >= low.bound_abs
        assert high.bound_rel_form >= low.bound_rel_form

    def test_dimension_ratio(self):
        r10 = assemble_bounds(self.form(4.0), spec(1e-3), 1.0, 10)
        r50 = assemble_bounds(self.form(4.0), spec(1e-3), 1.0, 50)
        assert r50.bound_abs / r10.bound_abs == pytest.approx(c4(50) / c4(10), rel=1e-12)

    def test_h_too_large(self):
        with pytest.raises(StepSizeTooLargeError):
            assemble_bounds(self.form(1.0), spec(0.5), 4.0, 1)

    def test_slope_matches_order(self):
        hs = 2.0 ** -np.arange(5, 10)
        bounds = [assemble_bounds(self.form(4.0), spec(h, 2.0), 1.0, 2).bound_abs for h in hs]
        slope = np.polyfit(np.log(hs), np.log(bounds), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.05)


@pytest.mark.parametrize("kind", ["explicit-euler", "crank-nicolson"])
def test_bound_dominates_ode_error(kind):
    exact = make_ode_lsf(None, 40.0)
    form = find_mlfp(exact)
    p_f = quadrature_pf(exact).value
    for level in range(4, 10):
        approx = make_ode_lsf(OdeScheme.at_level(kind, level), 40.0)
        form_h = find_mlfp(approx)
        c3 = estimate_c3(exact, approx, form_h.mlfp, mlfp=form.mlfp)
        s = DiscretizationSpec(h=approx.tag.h, s=approx.tag.s, c_fe=c3)
        report = assemble_bounds(form_h, s, c3, 1, beta_exact=form.beta)
        assert report.bound_abs >= abs(p_f - quadrature_pf(approx).value)
