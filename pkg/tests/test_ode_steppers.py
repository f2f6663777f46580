"""Tests for the time-steppers of y' = -u y."""

import numpy as np
import pytest

from pfbounds.core import (
    DomainError,
    OdeScheme,
    SchemeKind,
    SingularityError,
    integrate_to_one,
    mlfp_closed_form,
    oscillating_branch,
)
from pfbounds.utils import fit_order

LOG40 = np.log(40.0)


def closed_form(scheme, u):
    h = scheme.h
    if scheme.kind is SchemeKind.EXPLICIT_EULER:
        factor = 1.0 - u * h
    else:
        factor = (1.0 - h * u / 2.0) / (1.0 + h * u / 2.0)
    return factor ** scheme.steps


class TestOdeScheme:
    def test_at_level(self):
        scheme = OdeScheme.at_level("crank-nicolson", 3)
        assert scheme.kind is SchemeKind.CRANK_NICOLSON
        assert scheme.h == 0.125
        assert scheme.steps == 8
        assert scheme.order == 2.0

    @pytest.mark.parametrize("h", [0.3, 0.0, -0.5, 1.5])
    def test_reciprocal_must_be_integer(self, h):
        with pytest.raises(DomainError):
            OdeScheme(SchemeKind.EXPLICIT_EULER, h)


class TestIntegrateToOne:
    def test_single_euler_step(self):
        assert integrate_to_one(OdeScheme("explicit-euler", 1.0), 0.7) == pytest.approx(0.3)

    @pytest.mark.parametrize("kind", list(SchemeKind))
    def test_zero_rate(self, kind):
        assert integrate_to_one(OdeScheme.at_level(kind, 5), 0.0) == 1.0

    def test_euler_closed_form(self):
        u = -3.6889
        assert integrate_to_one(OdeScheme("explicit-euler", 2.0**-4), u) == pytest.approx(
            (1.0 - u / 16.0) ** 16, rel=1e-12
        )

    def test_random_pairs_match_closed_form(self, rng):
        for _ in range(200):
            scheme = OdeScheme.at_level(rng.choice(list(SchemeKind)), int(rng.integers(0, 10)))
            u = float(rng.uniform(-5.0, 5.0))
            assert integrate_to_one(scheme, u) == pytest.approx(closed_form(scheme, u), rel=1e-12)

    def test_array_input(self):
        scheme = OdeScheme.at_level("explicit-euler", 3)
        u = np.array([-1.0, 0.0, 1.0])
        np.testing.assert_allclose(integrate_to_one(scheme, u), [closed_form(scheme, v) for v in u], rtol=1e-14)

    def test_crank_nicolson_pole(self):
        with pytest.raises(SingularityError):
            integrate_to_one(OdeScheme("crank-nicolson", 1.0), -2.0)

    @pytest.mark.parametrize("kind, order", [("explicit-euler", 1.0), ("crank-nicolson", 2.0)])
    def test_global_error_order(self, kind, order):
        u = -LOG40
        hs = [2.0**-level for level in range(5, 10)]
        errs = [abs(np.exp(-u) - integrate_to_one(OdeScheme.at_level(kind, level), u)) for level in range(5, 10)]
        assert fit_order(hs, errs) == pytest.approx(order, abs=0.15)


class TestMlfpClosedForm:
    def test_exact(self):
        assert mlfp_closed_form(None, 40.0) == pytest.approx(-LOG40)

    def test_euler_single_step(self):
        assert mlfp_closed_form(OdeScheme("explicit-euler", 1.0), 40.0) == pytest.approx(-39.0)

    def test_crank_nicolson_formula(self):
        h = 0.25
        expected = 2.0 * (1.0 - 40.0**h) / (h * (1.0 + 40.0**h))
        assert mlfp_closed_form(OdeScheme("crank-nicolson", h), 40.0) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("kind", list(SchemeKind))
    def test_small_h_limit(self, kind):
        assert mlfp_closed_form(OdeScheme.at_level(kind, 20), 40.0) == pytest.approx(-LOG40, abs=1e-4)

    @pytest.mark.parametrize("kind", list(SchemeKind))
    def test_threshold_is_failure_boundary(self, kind):
        scheme = OdeScheme.at_level(kind, 4)
        threshold = mlfp_closed_form(scheme, 40.0)
        assert integrate_to_one(scheme, threshold) == pytest.approx(40.0, rel=1e-12)

    @pytest.mark.parametrize("kind, order", [("explicit-euler", 1.0), ("crank-nicolson", 2.0)])
    def test_distance_order(self, kind, order):
        levels = range(0, 10)
        hs = [2.0**-level for level in levels]
        dist = [abs(mlfp_closed_form(OdeScheme.at_level(kind, level), 40.0) + LOG40) for level in levels]
        assert fit_order(hs, dist, tail=5) == pytest.approx(order, abs=0.15)

    def test_y_max_above_one(self):
        with pytest.raises(DomainError):
            mlfp_closed_form(None, 0.5)


class TestOscillatingBranch:
    def test_odd_steps_have_none(self):
        assert oscillating_branch(OdeScheme("crank-nicolson", 1.0), 40.0) is None

    def test_crank_nicolson_half_step(self):
        scheme = OdeScheme("crank-nicolson", 0.5)
        lo, hi = oscillating_branch(scheme, 40.0)
        assert hi == -4.0
        assert lo == pytest.approx(-5.5, abs=0.01)
        assert integrate_to_one(scheme, lo) == pytest.approx(40.0, rel=1e-10)
        assert integrate_to_one(scheme, 0.5 * (lo + hi)) > 40.0

    def test_euler_branch(self):
        scheme = OdeScheme("explicit-euler", 0.5)
        lo, hi = oscillating_branch(scheme, 40.0)
        assert np.isinf(hi)
        assert integrate_to_one(scheme, lo) == pytest.approx(40.0, rel=1e-10)
        assert integrate_to_one(scheme, lo + 1.0) > 40.0
