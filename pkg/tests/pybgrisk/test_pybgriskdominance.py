"""Tests for first- and second-order dominance of W + X over W."""
# pylint: disable=used-before-assignment
import logging
import math

import numpy as np
import pytest

from .imports import *  # pylint: disable=W0401,W0614
from .testbase import TestBase, Defaults

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)

R_11_10 = 110.0832


class TestTheoremCheck(TestBase):
    """R(X) <= S(W) as a sufficient condition."""

    def test_met_and_inconclusive(self):
        x = self.gamble("plus11_minus10")
        met = fosd_theorem_check(x, PyBgRiskLaplace(0.0, 110.2))
        assert met.verdict == Verdict.SUFFICIENT_CONDITION_MET
        assert met.method == Method.THEOREM_BOUND
        assert met.worst_margin == pytest.approx(110.2 - R_11_10, abs=1e-3)
        assert fosd_theorem_check(x, PyBgRiskLaplace(0.0, 110.0)).verdict == Verdict.INCONCLUSIVE
        assert fosd_theorem_check(x, self.background("normal_100k")).verdict == Verdict.INCONCLUSIVE

    def test_never_refutes(self):
        x = self.gamble("plus110_minus100")
        report = fosd_theorem_check(x, PyBgRiskLaplace(0.0, 1.0))
        assert report.verdict != Verdict.NOT_DOMINANT
        assert not report.is_dominant

    def test_needs_positive_mean(self):
        with pytest.raises(NonPositiveMeanError):
            fosd_theorem_check(self.gamble("zero_mean"), PyBgRiskLaplace(0.0, 10.0))


class TestFosdVerify(TestBase):
    """Grid verification, first order."""

    @pytest.mark.parametrize("family", [PyBgRiskLaplace, PyBgRiskLogistic],
                             ids=lambda f: f.__name__)
    def test_sharp_at_riskiness(self, family):
        x = self.gamble("plus11_minus10")
        above = fosd_verify(x, family(0.0, 1.001 * R_11_10))
        assert above.verdict == Verdict.DOMINANT
        assert above.worst_margin >= -MARGIN_TOLERANCE
        assert above.method == Method.GRID_VERIFICATION
        assert above.grid_meta.points > 0
        below = fosd_verify(x, family(0.0, 0.99 * R_11_10))
        assert below.verdict == Verdict.NOT_DOMINANT
        assert below.worst_margin < 0.0
        assert below.witness_a is not None
        assert below.tail_coefficient < 0.0

    def test_laplace_fixture(self):
        x = self.gamble("plus11_minus10")
        assert fosd_verify(x, self.background("laplace_110")).verdict == Verdict.NOT_DOMINANT
        assert fosd_verify(x, PyBgRiskLaplace(0.0, 110.2)).is_dominant

    def test_normal_never_dominates(self):
        x = self.gamble("plus11_minus10")
        for sigma in (10.0, 1000.0, 1e5):
            report = fosd_verify(x, PyBgRiskNormal(0.0, sigma))
            assert report.verdict == Verdict.NOT_DOMINANT
            assert report.tail_coefficient == -math.inf

    @pytest.mark.parametrize("w", [PyBgRiskNormal(0.0, 1000.0), PyBgRiskNormal(0.0, 1e5),
                                   PyBgRiskNormal(0.0, 10.0), PyBgRiskLaplace(0.0, 50.0),
                                   PyBgRiskLogistic(0.0, 50.0), PyBgRiskLaplace(0.0, 0.01)],
                             ids=lambda w: f"{w.family}-{w.stdev:g}")
    def test_not_dominant_carries_negative_margin(self, w):
        x = self.gamble("plus11_minus10")
        for report in (fosd_verify(x, w), sosd_verify(x, w)):
            assert report.verdict == Verdict.NOT_DOMINANT
            assert report.worst_margin < -MARGIN_TOLERANCE
            assert report.witness_a is not None
            assert math.isfinite(report.witness_a)

    def test_far_tail_margin_is_log_ratio(self):
        x = self.gamble("plus11_minus10")
        report = fosd_verify(x, PyBgRiskNormal(0.0, 1e5))
        assert report.margin_kind == MarginKind.LOG_RATIO
        assert report.to_dict()["margin_kind"] == "log_ratio"
        assert fosd_verify(x, PyBgRiskLaplace(0.0, 50.0)).margin_kind == MarginKind.ABSOLUTE

    @pytest.mark.parametrize("family", [PyBgRiskLaplace, PyBgRiskLogistic],
                             ids=lambda f: f.__name__)
    def test_narrow_background(self, family):
        x = self.gamble("plus11_minus10")
        w = family(0.0, 0.01)
        assert left_tail_coefficient(w, x) == -math.inf
        assert right_tail_coefficient(w, x) == math.inf
        for report in (fosd_verify(x, w), sosd_verify(x, w)):
            assert report.verdict == Verdict.NOT_DOMINANT
            assert report.worst_margin < -MARGIN_TOLERANCE
        assert fosd_verify_pair(x, self.gamble("sure_one"), w).verdict == Verdict.NOT_DOMINANT

    def test_sure_gain_always_dominates(self):
        x = self.gamble("sure_one")
        for w in (PyBgRiskNormal(0.0, 10.0), PyBgRiskLaplace(0.0, 1e-3), PyBgRiskLogistic(5.0, 2.0)):
            assert fosd_verify(x, w).verdict == Verdict.DOMINANT

    def test_same_law_dominates(self):
        x = self.gamble("plus11_minus10")
        assert fosd_verify(self.gamble("sure_zero"), PyBgRiskLaplace(0.0, 10.0)).is_dominant
        assert fosd_verify_pair(x, x, PyBgRiskNormal(0.0, 30.0)).is_dominant

    def test_negative_mean_is_not_dominant(self):
        report = fosd_verify(self.gamble("plus10_minus11"), PyBgRiskLaplace(0.0, 1e6))
        assert report.verdict == Verdict.NOT_DOMINANT

    def test_scale_invariance(self):
        x = self.gamble("plus11_minus10")
        for lam, expected in ((100.0, Verdict.NOT_DOMINANT), (120.0, Verdict.DOMINANT)):
            small = fosd_verify(x, PyBgRiskLaplace(0.0, lam))
            large = fosd_verify(scale(x, 10.0), PyBgRiskLaplace(0.0, 10.0 * lam))
            assert small.verdict == large.verdict == expected

    def test_piecewise_background(self):
        x = Gamble.fifty_fifty(2.0, 1.0)
        assert riskiness(x).riskiness < 20.0
        assert fosd_verify(x, self.background("piecewise_skewed")).is_dominant

    def test_fosd_check_dispatch(self):
        x = self.gamble("plus11_minus10")
        fast = fosd_check(x, PyBgRiskLaplace(0.0, 200.0))
        assert fast.method == Method.THEOREM_BOUND
        slow = fosd_check(x, PyBgRiskLaplace(0.0, 50.0))
        assert slow.method == Method.GRID_VERIFICATION
        assert slow.verdict == Verdict.NOT_DOMINANT
        negative = fosd_check(self.gamble("plus10_minus11"), PyBgRiskLaplace(0.0, 50.0))
        assert negative.verdict == Verdict.NOT_DOMINANT

    def test_pair(self):
        x = Gamble.fifty_fifty(12.0, 10.0)
        y = self.gamble("plus11_minus10")
        assert fosd_verify_pair(x, y, PyBgRiskLaplace(0.0, 50.0)).is_dominant
        assert fosd_verify_pair(y, x, PyBgRiskLaplace(0.0, 50.0)).verdict == Verdict.NOT_DOMINANT

    def test_report_dict(self):
        data = fosd_verify(self.gamble("plus11_minus10"), PyBgRiskLaplace(0.0, 50.0)).to_dict()
        assert data["verdict"] == "NotDominant"
        assert data["method"] == "GridVerification"
        assert isinstance(data["witness_a"], float)

    @pytest.mark.parametrize("gain, loss", Defaults.gambles)
    def test_flip_located_by_bisection(self, gain, loss):
        x = Gamble.fifty_fifty(gain, loss)
        r = riskiness(x).riskiness
        low, high = 0.9 * r, 1.1 * r
        for _ in range(9):
            middle = 0.5 * (low + high)
            if fosd_verify(x, PyBgRiskLaplace(0.0, middle)).is_dominant:
                high = middle
            else:
                low = middle
        assert abs(0.5 * (low + high) / r - 1.0) < 0.005

    @pytest.mark.slow
    def test_sufficient_condition_implies_dominance(self):
        rng = np.random.default_rng(5)
        families = [PyBgRiskLaplace, PyBgRiskLogistic]
        met = 0
        for _ in range(200):
            x = self.random_gamble(rng)
            r = riskiness(x).riskiness
            w = families[rng.integers(len(families))](rng.uniform(-50.0, 50.0),
                                                      r * rng.uniform(0.8, 2.0))
            if fosd_theorem_check(x, w).verdict == Verdict.SUFFICIENT_CONDITION_MET:
                met += 1
                assert fosd_verify(x, w).is_dominant
        assert met > 100

    @pytest.mark.parametrize("gain, loss", Defaults.gambles)
    def test_table_laplace_and_logistic_sigmas(self, gain, loss):
        x = Gamble.fifty_fifty(gain, loss)
        laplace, logistic, _ = Defaults.table1[Defaults.label(gain, loss)]
        assert fosd_verify(x, PyBgRiskLaplace.from_stdev(0.0, float(laplace))).is_dominant
        assert fosd_verify(x, PyBgRiskLogistic.from_stdev(0.0, float(logistic))).is_dominant
        exact = Defaults.table1_exact[Defaults.label(gain, loss)][0]
        below = fosd_verify(x, PyBgRiskLaplace.from_stdev(0.0, 0.95 * exact))
        assert below.verdict == Verdict.NOT_DOMINANT


class TestMargins(TestBase):
    """Margin helpers and tail coefficients."""

    def test_cdf_margin_direct(self):
        w = PyBgRiskLogistic(0.0, 30.0)
        x = self.gamble("three_point")
        a = np.array([-100.0, -3.0, 0.0, 7.0, 250.0])
        direct = w.cdf(a) - sum(p * w.cdf(a - v) for v, p in zip(x.values, x.probabilities))
        assert np.allclose(cdf_margin(w, a, x), direct, rtol=0.0, atol=1e-14)

    def test_integrated_margin_direct(self):
        w = PyBgRiskLaplace(0.0, 30.0)
        x = self.gamble("three_point")
        a = np.array([-100.0, -3.0, 0.0, 7.0, 250.0])
        direct = w.integrated_cdf(a) - sum(p * w.integrated_cdf(a - v)
                                           for v, p in zip(x.values, x.probabilities))
        assert np.allclose(integrated_margin(w, a, x), direct, rtol=1e-12, atol=1e-12)

    def test_tail_coefficients(self):
        x = self.gamble("plus11_minus10")
        w = PyBgRiskLaplace(0.0, 50.0)
        expected = 1.0 - 0.5 * (math.exp(-11.0 / 50.0) + math.exp(10.0 / 50.0))
        assert left_tail_coefficient(w, x) == pytest.approx(expected, rel=1e-12)
        assert right_tail_coefficient(w, x) == \
            pytest.approx(0.5 * (math.exp(11.0 / 50.0) + math.exp(-10.0 / 50.0)) - 1.0, rel=1e-12)
        assert left_tail_coefficient(PyBgRiskNormal(0.0, 1.0), x) == -math.inf
        assert left_tail_coefficient(PyBgRiskNormal(0.0, 1.0), self.gamble("sure_one")) == 1.0


class TestLimitedLiability(TestBase):
    """Dominance of max(W + X, ell) over max(W, ell)."""

    def test_table_normal_sigma(self):
        x = self.gamble("plus11_minus10")
        report = fosd_verify_limited_liability(x, self.background("normal_100k"), 0.0)
        assert report.is_dominant
        assert report.sufficient_condition is True

    def test_below_table_normal_sigma(self):
        x = self.gamble("plus11_minus10")
        report = fosd_verify_limited_liability(x, PyBgRiskNormal(100000.0, 3000.0), 0.0)
        assert report.verdict == Verdict.NOT_DOMINANT
        assert report.sufficient_condition is False
        assert report.witness_a >= 0.0

    def test_background_below_floor(self):
        x = self.gamble("plus11_minus10")
        report = fosd_verify_limited_liability(x, PyBgRiskNormal(0.0, 1.0), 1e6)
        assert report.verdict == Verdict.DOMINANT

    def test_negative_mean_has_no_sufficient_condition(self):
        report = fosd_verify_limited_liability(self.gamble("plus10_minus11"),
                                               PyBgRiskLaplace(0.0, 100.0), 0.0)
        assert report.sufficient_condition is None

    def test_dominant_scale_bound(self):
        x = self.gamble("plus11_minus10")
        assert dominant_scale_bound(x, PyBgRiskLaplace(0.0, 110.0)) == \
            pytest.approx(110.0 / R_11_10, rel=1e-5)
        assert dominant_scale_bound(x, PyBgRiskNormal(0.0, 1.0)) == 0.0
        w = self.background("normal_100k")
        t = dominant_scale_bound(x, w, 0.0)
        r = riskiness(x).riskiness
        assert 1.0 < t < 1.01
        assert t * r <= w.limited_liability_size(-11.0 * t)
        assert 1.001 * t * r > w.limited_liability_size(-11.0 * 1.001 * t)

    @pytest.mark.parametrize("gain, loss", Defaults.gambles)
    def test_rounded_normal_column(self, gain, loss):
        sigma = Defaults.table1[Defaults.label(gain, loss)][2]
        w = PyBgRiskNormal(Defaults.normal_mu, float(sigma))
        report = fosd_verify_limited_liability(Gamble.fifty_fifty(gain, loss), w, Defaults.ell)
        assert report.verdict == Verdict.DOMINANT

    def test_monotone_in_floor(self):
        x = self.gamble("plus11_minus10")
        w = PyBgRiskNormal(0.0, 50.0)
        floors = [-300.0, -200.0, -150.0, -100.0, -50.0, 0.0, 50.0]
        dominant = [fosd_verify_limited_liability(x, w, ell).is_dominant for ell in floors]
        assert dominant == sorted(dominant)
        assert not dominant[0]
        assert dominant[-1]


class TestSosdVerify(TestBase):
    """Grid verification, second order."""

    def test_laplace(self):
        x = self.gamble("plus11_minus10")
        report = sosd_verify(x, PyBgRiskLaplace(0.0, 110.2))
        assert report.is_dominant
        assert report.order == DominanceOrder.SECOND
        assert report.sufficient_condition is True
        assert sosd_verify(x, PyBgRiskLaplace(0.0, 55.0)).verdict == Verdict.NOT_DOMINANT

    def test_normal_fails_in_left_tail(self):
        report = sosd_verify(self.gamble("plus11_minus10"), PyBgRiskNormal(0.0, 1000.0))
        assert report.verdict == Verdict.NOT_DOMINANT
        assert report.sufficient_condition is False

    def test_zero_mean_rejected(self):
        with pytest.raises(NonPositiveMeanError):
            sosd_verify(self.gamble("zero_mean"), PyBgRiskLaplace(0.0, 10.0))

    def test_first_order_implies_second_order(self):
        rng = np.random.default_rng(11)
        families = [PyBgRiskLaplace, PyBgRiskLogistic]
        for _ in range(50):
            x = self.random_gamble(rng, spread=20.0)
            r = riskiness(x).riskiness
            w = families[rng.integers(len(families))](0.0, r * rng.uniform(0.5, 3.0))
            second = sosd_verify(x, w)
            if r <= w.exp_size_second_order():
                assert second.sufficient_condition is True
                assert second.is_dominant
            if fosd_verify(x, w).is_dominant:
                assert second.is_dominant
