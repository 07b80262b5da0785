"""Tests for the sufficient-sigma thresholds."""
# pylint: disable=used-before-assignment
import logging
import math

import pytest

from .imports import *  # pylint: disable=W0401,W0614
from .testbase import TestBase, Defaults

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


class TestThresholds(TestBase):
    """Closed-form sigma thresholds."""

    def test_table1_rounded(self):
        rows = table1()
        assert [row.label for row in rows] == list(Defaults.table1)
        for row in rows:
            rounded = tuple(int(Helpers.round_up(s))
                            for s in (row.sigma_laplace, row.sigma_logistic, row.sigma_normal))
            assert rounded == Defaults.table1[row.label]
            assert row.normal_mu == Defaults.normal_mu
            assert row.ell == Defaults.ell

    def test_table1_exact(self):
        for row in table1():
            expected = Defaults.table1_exact[row.label]
            assert row.sigma_laplace == pytest.approx(expected[0], abs=0.01)
            assert row.sigma_logistic == pytest.approx(expected[1], abs=0.01)
            assert row.sigma_normal == pytest.approx(expected[2], abs=0.01)

    def test_column_ratio(self):
        for row in table1():
            assert row.sigma_logistic / row.sigma_laplace == pytest.approx(Defaults.column_ratio,
                                                                          rel=1e-12)

    def test_homogeneity(self):
        small = Defaults.fifty_fifty(11.0, 10.0)
        large = Defaults.fifty_fifty(110.0, 100.0)
        for family in (BackgroundFamily.LAPLACE, BackgroundFamily.LOGISTIC):
            assert sigma_threshold(large, family) == \
                pytest.approx(10.0 * sigma_threshold(small, family), rel=1e-8)

    def test_normal_threshold_meets_size(self):
        x = Defaults.fifty_fifty(55.0, 50.0)
        sigma = sigma_threshold(x, BackgroundFamily.NORMAL, Defaults.normal_mu, Defaults.ell)
        w = PyBgRiskNormal(Defaults.normal_mu, sigma)
        size = w.limited_liability_size(Defaults.ell - x.max_value)
        assert size == pytest.approx(riskiness(x).riskiness, rel=1e-9)

    def test_laplace_threshold_meets_size(self):
        x = Defaults.fifty_fifty(11.0, 10.0)
        w = PyBgRiskLaplace.from_stdev(0.0, sigma_threshold_laplace(x))
        assert w.exp_size() == pytest.approx(riskiness(x).riskiness, rel=1e-12)

    def test_row_without_normal(self):
        row = threshold_row(11.0, 10.0, mu=None, ell=None)
        assert row.sigma_normal is None
        assert row.sigma_laplace > 0.0

    def test_negative_headroom(self):
        x = Defaults.fifty_fifty(11.0, 10.0)
        with pytest.raises(NegativeHeadroomError):
            sigma_threshold_normal(x, 0.0, 100.0)

    def test_dispatch_errors(self):
        x = Defaults.fifty_fifty(11.0, 10.0)
        with pytest.raises(InputValidationError):
            sigma_threshold(x, BackgroundFamily.NORMAL)
        with pytest.raises(InputValidationError):
            sigma_threshold(x, BackgroundFamily.PIECEWISE)
        with pytest.raises(ValueError):
            sigma_threshold(x, "cauchy")

    def test_label(self):
        assert gamble_label(110.0, 100.0) == "110/100"
        assert Defaults.label(1100.0, 1000.0) == "1100/1000"

    def test_zero_mean_has_no_threshold(self):
        with pytest.raises(NonPositiveMeanError):
            sigma_threshold_laplace(self.gamble("zero_mean"))
        assert math.isfinite(sigma_threshold_laplace(self.gamble("three_point")))
