"""Laplace background risk."""

import logging
import math

import numpy as np
from scipy import stats

from .constant import LOGGER_NAME, BackgroundFamily
from .pybgriskbackgroundbase import PyBgRiskLocationScaleBase

_LOGGER = logging.getLogger(LOGGER_NAME)


class PyBgRiskLaplace(PyBgRiskLocationScaleBase):
    """Laplace(mu, lambda): g(a) = exp(-|a - mu| / lambda) / (2 lambda).

    g'/g is +1/lambda left of mu and -1/lambda right of it, so S = S* = S2 = lambda."""

    family = BackgroundFamily.LAPLACE
    stdev_per_scale = math.sqrt(2.0)

    @staticmethod
    def _frozen(loc: float, scale: float):
        return stats.laplace(loc=loc, scale=scale)

    def logcdf(self, a):
        z = self._z(a)
        return np.where(z < 0.0, math.log(0.5) + np.minimum(z, 0.0),
                        np.log1p(-0.5 * np.exp(-np.maximum(z, 0.0))))

    def logsf(self, a):
        z = self._z(a)
        return np.where(z > 0.0, math.log(0.5) - np.maximum(z, 0.0),
                        np.log1p(-0.5 * np.exp(np.minimum(z, 0.0))))

    def integrated_cdf(self, a):
        z = self._z(a)
        below = 0.5 * self._scale * np.exp(np.minimum(z, 0.0))
        above = self._scale * (np.maximum(z, 0.0) + 0.5 * np.exp(-np.maximum(z, 0.0)))
        return np.where(z <= 0.0, below, above)

    def log_integrated_cdf(self, a):
        z = self._z(a)
        with np.errstate(divide="ignore"):
            above = np.log(self.integrated_cdf(a))
        return np.where(z <= 0.0, math.log(0.5 * self._scale) + z, above)

    def log_density_derivative(self, a, side: str = "right"):
        z = self._z(a)
        rate = 1.0 / self._scale
        at_kink = rate if side == "left" else -rate
        return np.where(z < 0.0, rate, np.where(z > 0.0, -rate, at_kink))

    def kink_points(self) -> np.ndarray:
        return np.array([self._loc])

    def left_tail_rate(self) -> float:
        return 1.0 / self._scale

    def right_tail_rate(self) -> float:
        return 1.0 / self._scale

    def log_derivative_sup(self, floor=None):
        if floor is None or floor < self._loc:
            return 1.0 / self._scale, self._loc
        return -1.0 / self._scale, float(floor)

    def density_ratio_sup(self):
        return 1.0 / self._scale, self._loc
