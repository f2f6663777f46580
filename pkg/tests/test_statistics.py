"""Tests for order fitting and replicate summaries."""

import math

import numpy as np
import pytest

from pfbounds.core import FitError
from pfbounds.utils import confidence_interval, fit_order, replicate_summary


class TestFitOrder:
    @pytest.mark.parametrize("order", [1.0, 2.0, 3.0])
    def test_exact_power_law(self, order):
        hs = 2.0 ** -np.arange(1, 10)
        assert fit_order(hs, 0.7 * hs**order) == pytest.approx(order, abs=1e-10)

    def test_uses_finest_levels(self):
        hs = 2.0 ** -np.arange(1, 10)
        errs = hs**2
        errs[:4] = 1.0  # pre-asymptotic levels
        assert fit_order(hs, errs, tail=5) == pytest.approx(2.0, abs=1e-10)

    def test_order_independent_of_row_order(self):
        hs = 2.0 ** -np.arange(1, 8)
        assert fit_order(hs[::-1], hs[::-1]) == pytest.approx(fit_order(hs, hs))

    def test_ignores_nan_and_zero(self):
        hs = 2.0 ** -np.arange(1, 6)
        errs = hs.copy()
        errs[-1] = math.nan
        errs[-2] = 0.0
        assert fit_order(hs, errs, tail=5) == pytest.approx(1.0, abs=1e-10)

    def test_too_few_points(self):
        with pytest.raises(FitError):
            fit_order([0.5, 0.25, 0.125], [math.nan, 0.0, 0.1], tail=3)

    def test_length_mismatch(self):
        with pytest.raises(FitError):
            fit_order([0.5, 0.25], [0.5])


class TestReplicateSummary:
    def test_values(self):
        summary = replicate_summary([1.0, 2.0, 3.0])
        assert summary.mean == 2.0
        assert summary.std == pytest.approx(1.0)
        assert summary.cov == pytest.approx(0.5)
        assert summary.mean_cov == pytest.approx(0.5 / np.sqrt(3.0))
        assert summary.ci_lower < 2.0 < summary.ci_upper
        assert summary.n == 3

    def test_single_value(self):
        summary = replicate_summary([4.0])
        assert summary.std == 0.0
        assert (summary.ci_lower, summary.ci_upper) == (4.0, 4.0)

    def test_zero_mean(self):
        assert math.isinf(replicate_summary([0.0, 0.0]).cov)


class TestConfidenceInterval:
    def test_t_interval(self):
        lower, upper = confidence_interval([1.0, 2.0, 3.0, 4.0])
        half = 3.1824463 * np.std([1.0, 2.0, 3.0, 4.0], ddof=1) / 2.0
        assert lower == pytest.approx(2.5 - half, rel=1e-6)
        assert upper == pytest.approx(2.5 + half, rel=1e-6)

    def test_constant_values(self):
        assert confidence_interval([3.0, 3.0, 3.0]) == (3.0, 3.0)

    def test_wider_at_higher_level(self):
        values = [1.0, 1.5, 2.5, 3.0]
        narrow = confidence_interval(values, 0.9)
        wide = confidence_interval(values, 0.99)
        assert wide[0] < narrow[0] and wide[1] > narrow[1]
