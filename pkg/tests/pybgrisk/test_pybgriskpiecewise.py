"""Tests for the piecewise log-quadratic background risk."""
# pylint: disable=used-before-assignment
import logging
import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from .imports import *  # pylint: disable=W0401,W0614
from .testbase import TestBase

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


def _segment_quad(w, func):
    edges = [-math.inf] + w.kink_points().tolist() + [math.inf]
    return math.fsum(quad(func, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)[0]
                     for lo, hi in zip(edges[:-1], edges[1:]))


class TestPyBgRiskPiecewise(TestBase):
    """Closed-form segment algebra against known densities."""

    def test_matches_laplace(self):
        w = self.background("piecewise_laplace_50")
        reference = PyBgRiskLaplace(0.0, 50.0)
        grid = np.linspace(-400.0, 400.0, 161)
        assert np.allclose(w.cdf(grid), reference.cdf(grid), rtol=0.0, atol=1e-12)
        assert np.allclose(w.logpdf(grid), reference.logpdf(grid), rtol=1e-12, atol=1e-12)
        assert np.allclose(w.integrated_cdf(grid), reference.integrated_cdf(grid),
                           rtol=1e-9, atol=1e-12)
        assert abs(w.mean) <= 1e-9
        assert w.stdev == pytest.approx(50.0 * math.sqrt(2.0), rel=1e-7)
        assert w.exp_size() == pytest.approx(50.0, rel=1e-12)
        assert w.exp_size_two_sided() == pytest.approx(50.0, rel=1e-12)

    def test_matches_standard_normal(self):
        w = self.background("piecewise_standard_normal")
        grid = np.linspace(-6.0, 6.0, 121)
        assert np.allclose(w.cdf(grid), stats.norm.cdf(grid), rtol=0.0, atol=1e-12)
        assert np.allclose(w.integrated_cdf(grid), PyBgRiskNormal(0.0, 1.0).integrated_cdf(grid),
                           rtol=1e-8, atol=1e-12)
        assert float(w.logcdf(-30.0)) == pytest.approx(float(stats.norm.logcdf(-30.0)), rel=1e-10)
        assert float(w.logsf(30.0)) == pytest.approx(float(stats.norm.logsf(30.0)), rel=1e-10)
        assert w.stdev == pytest.approx(1.0, rel=1e-8)
        assert w.exp_size() == 0.0
        assert w.left_tail_rate() == math.inf

    def test_quantile_inverts_cdf(self):
        w = self.background("piecewise_skewed")
        levels = np.array([1e-6, 0.01, 0.25, 0.5, 0.75, 0.99, 1.0 - 1e-6])
        assert np.max(np.abs(w.cdf(w.quantile(levels)) - levels)) <= CDF_ROUND_TRIP_TOLERANCE
        assert isinstance(w.quantile(0.5), float)
        assert not any(record.levelname == "WARNING" for record in self.caplog.records)

    def test_density_is_normalized(self):
        w = self.background("piecewise_skewed")
        assert _segment_quad(w, lambda t: float(w.pdf(t))) == pytest.approx(1.0, rel=1e-9)
        first = _segment_quad(w, lambda t: t * float(w.pdf(t)))
        assert w.mean == pytest.approx(first, rel=1e-8)

    def test_cdf_is_continuous_at_knots(self):
        w = self.background("piecewise_skewed")
        for knot in w.kink_points():
            step = 1e-9 * max(1.0, abs(knot))
            assert float(w.cdf(knot + step)) - float(w.cdf(knot - step)) <= 1e-8
            assert float(w.logpdf(knot + step)) == pytest.approx(float(w.logpdf(knot - step)),
                                                                 abs=1e-7)

    def test_skewed_sizes(self):
        w = self.background("piecewise_skewed")
        assert w.exp_size() == pytest.approx(20.0, rel=1e-12)
        assert w.reflected().exp_size() == pytest.approx(25.0, rel=1e-12)
        assert w.exp_size_two_sided() == pytest.approx(20.0, rel=1e-12)
        assert w.exp_size_second_order() >= 20.0 * (1.0 - 1e-9)
        report = w.size_report()
        assert report.argsup_left == -math.inf

    def test_skewed_limited_liability(self):
        w = self.background("piecewise_skewed")
        assert w.limited_liability_size(-20.0) == pytest.approx(20.0, rel=1e-12)
        assert w.limited_liability_size(0.0) == math.inf
        # on [-5, 0] the largest g'/g is 0.01 + 2 * -0.001 * 5 = 0 at the floor
        assert w.limited_liability_size(-5.0) == math.inf
        assert w.limited_liability_size(-8.0) == pytest.approx(1.0 / 0.006, rel=1e-9)

    def test_skewed_exactness(self):
        w = self.background("piecewise_skewed")
        assert w.is_exactly_s_dominant(19.0)
        assert w.is_exactly_s_dominant(20.0)
        assert not w.is_exactly_s_dominant(21.0)
        assert not any("disagrees" in record.message for record in self.caplog.records)

    def test_scaling_and_shift(self):
        w = self.background("piecewise_skewed")
        assert w.scaled(2.0).exp_size() == pytest.approx(40.0, rel=1e-12)
        assert w.scaled(2.0).mean == pytest.approx(2.0 * w.mean, rel=1e-9)
        moved = w.shifted(7.5)
        assert moved.exp_size() == pytest.approx(20.0, rel=1e-12)
        assert moved.mean == pytest.approx(w.mean + 7.5, rel=1e-9)
        grid = np.linspace(-50.0, 60.0, 23)
        assert np.allclose(moved.cdf(grid + 7.5), w.cdf(grid), rtol=0.0, atol=1e-12)

    def test_reflection_mirrors_cdf(self):
        w = self.background("piecewise_skewed")
        mirror = w.reflected()
        grid = np.linspace(-50.0, 60.0, 23)
        assert np.allclose(mirror.sf(-grid), w.cdf(grid), rtol=0.0, atol=1e-12)
        assert mirror.mean == pytest.approx(-w.mean, rel=1e-9)

    def test_to_dict_round_trip(self):
        w = self.background("piecewise_skewed")
        again = background_from_dict(w.to_dict())
        grid = np.linspace(-50.0, 60.0, 23)
        assert np.array_equal(again.cdf(grid), w.cdf(grid))
        assert w.to_dict()["family"] == "piecewise"

    @pytest.mark.parametrize("knots, coeffs", [
        ([], [[0.1, 0.0]]),
        ([0.0, 0.0], [[0.1, 0.0], [0.0, -0.1], [-0.1, 0.0]]),
        ([1.0, 0.0], [[0.1, 0.0], [0.0, -0.1], [-0.1, 0.0]]),
        ([0.0], [[0.1, 0.0]]),
        ([0.0], [[-0.1, 0.0], [-0.1, 0.0]]),
        ([0.0], [[0.1, 0.0], [0.1, 0.0]]),
        ([0.0], [[0.1, 0.0], [-0.1, 0.2]]),
        ([math.nan], [[0.1, 0.0], [-0.1, 0.0]]),
    ])
    def test_invalid(self, knots, coeffs):
        with pytest.raises(InvalidDistributionError):
            PyBgRiskPiecewise(knots, coeffs)
