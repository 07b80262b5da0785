"""Tests for the prospect-theory evaluation."""
# pylint: disable=used-before-assignment
import logging

import numpy as np
import pytest

from .imports import *  # pylint: disable=W0401,W0614
from .testbase import TestBase, Defaults

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)

GAMMA = 0.61
DELTA = 0.69


def _direct_weight(p, c):
    return p ** c / (p ** c + (1.0 - p) ** c) ** (1.0 / c)


class TestCptPrimitives(TestBase):
    """Weighting, value function and rank-dependent value."""

    def test_weights(self):
        for p in (0.01, 0.1, 0.5, 0.9, 0.99):
            assert weight_gain(p) == pytest.approx(_direct_weight(p, GAMMA), rel=1e-12)
            assert weight_loss(p) == pytest.approx(_direct_weight(p, DELTA), rel=1e-12)
        assert weight_gain(0.0) == 0.0
        assert weight_gain(1.0) == 1.0
        assert weight_loss(0.0) == 0.0
        assert weight_loss(1.0) == 1.0

    def test_weights_inverse_s(self):
        assert weight_gain(0.01) > 0.01
        assert weight_gain(0.99) < 0.99

    @pytest.mark.parametrize("weight", [weight_gain, weight_loss])
    def test_weights_monotone(self, weight):
        values = weight(np.linspace(0.0, 1.0, 10 ** 4))
        assert values[0] == 0.0
        assert values[-1] == 1.0
        assert np.all(np.diff(values) > 0.0)

    def test_value_respects_first_order_shift(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(2, 12))
            support = np.sort(rng.uniform(-20.0, 20.0, n))
            probabilities = rng.dirichlet(np.ones(n))
            before = cpt_value(DiscretizedLottery(support, probabilities))
            shifted = support.copy()
            shifted[rng.integers(n)] += 1.0
            order = np.argsort(shifted, kind="stable")
            after = cpt_value(DiscretizedLottery(shifted[order], probabilities[order]))
            assert after >= before - 1e-12

    def test_value_function(self):
        assert float(value_function(100.0)) == pytest.approx(100.0 ** 0.88)
        assert float(value_function(-100.0)) == pytest.approx(-2.25 * 100.0 ** 0.88)
        assert float(value_function(0.0)) == 0.0

    def test_cpt_value(self):
        assert cpt_value(DiscretizedLottery.point(0.0)) == 0.0
        assert cpt_value(DiscretizedLottery.point(10.0)) == pytest.approx(10.0 ** 0.88, rel=1e-12)
        x = Defaults.fifty_fifty(11.0, 10.0)
        expected = (11.0 ** 0.88 * _direct_weight(0.5, GAMMA)
                    - 2.25 * 10.0 ** 0.88 * _direct_weight(0.5, DELTA))
        assert cpt_value(DiscretizedLottery.from_gamble(x)) == pytest.approx(expected, rel=1e-12)

    def test_custom_params(self):
        params = CptParams(gamma=1.0, delta=1.0, loss_aversion=1.0, rho=1.0)
        x = self.gamble("three_point")
        assert cpt_value(DiscretizedLottery.from_gamble(x), params) == pytest.approx(mean(x), rel=1e-12)
        with pytest.raises(InputValidationError):
            CptParams(gamma=0.0)

    def test_convolve(self):
        z = DiscretizedLottery(np.array([-1.0, 1.0]), np.array([0.5, 0.5]))
        combined = convolve(z, self.gamble("plus_minus_two"))
        assert combined.support.tolist() == [-3.0, -1.0, 1.0, 3.0]
        assert combined.probabilities.tolist() == [0.25, 0.25, 0.25, 0.25]


class TestCptAcceptance(TestBase):
    """Acceptance with and without background risk."""

    def test_rejected_in_isolation(self):
        assert not cpt_accepts(Defaults.fifty_fifty(11.0, 10.0), None)

    def test_sure_gain_accepted(self):
        w = PyBgRiskLaplace(0.0, 50.0)
        assert cpt_accepts(self.gamble("sure_one"), w, n_points=CPT_MIN_POINTS)
        assert cpt_sigma_threshold(self.gamble("sure_one"), BackgroundFamily.LAPLACE) == 0.0

    def test_centered_background(self):
        w = centered_background(BackgroundFamily.LOGISTIC, 30.0)
        assert w.mean == 0.0
        assert w.stdev == pytest.approx(30.0)
        with pytest.raises(InputValidationError):
            centered_background(BackgroundFamily.PIECEWISE, 30.0)

    def test_no_acceptance(self, mocker):
        mocker.patch("bgrisk.pybgrisk.pybgriskcpt.cpt_accepts", return_value=False)
        with pytest.raises(NoAcceptanceFoundError):
            cpt_sigma_threshold(Defaults.fifty_fifty(11.0, 10.0), BackgroundFamily.NORMAL)
        assert any(record.levelname == "ERROR" for record in self.caplog.records)

    @pytest.mark.slow
    @pytest.mark.parametrize("gain, loss", Defaults.gambles)
    def test_table2_row(self, gain, loss):
        x = Defaults.fifty_fifty(gain, loss)
        expected = Defaults.table2[Defaults.label(gain, loss)]
        families = (BackgroundFamily.LAPLACE, BackgroundFamily.LOGISTIC, BackgroundFamily.NORMAL)
        for family, target in zip(families, expected):
            assert cpt_sigma_threshold(x, family) == pytest.approx(target, rel=0.05)

    @pytest.mark.slow
    @pytest.mark.parametrize("family", [BackgroundFamily.LAPLACE, BackgroundFamily.NORMAL])
    def test_scale_consistency(self, family):
        x = Defaults.fifty_fifty(11.0, 10.0)
        small = cpt_sigma_threshold(x, family, n_points=CPT_FAST_POINTS)
        large = cpt_sigma_threshold(scale(x, 10.0), family, n_points=CPT_FAST_POINTS)
        assert large == pytest.approx(10.0 * small, rel=0.02)

    @pytest.mark.slow
    def test_resolution_stability(self):
        x = Defaults.fifty_fifty(11.0, 10.0)
        coarse = cpt_sigma_threshold(x, BackgroundFamily.LAPLACE, n_points=CPT_DEFAULT_POINTS)
        fine = cpt_sigma_threshold(x, BackgroundFamily.LAPLACE, n_points=2 * CPT_DEFAULT_POINTS)
        assert abs(coarse - fine) < 0.5
