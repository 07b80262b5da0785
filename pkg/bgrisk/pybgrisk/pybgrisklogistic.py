"""Logistic background risk."""

import logging
import math

import numpy as np
from scipy import stats
from scipy.special import log_expit

from .constant import LOGGER_NAME, BackgroundFamily
from .pybgriskbackgroundbase import PyBgRiskLocationScaleBase

_LOGGER = logging.getLogger(LOGGER_NAME)

# Below this z, softplus(z) is computed from its exponential tail.
_SOFTPLUS_TAIL_Z = -30.0


class PyBgRiskLogistic(PyBgRiskLocationScaleBase):
    """Logistic(mu, s). g'/g = (1 - 2F)/s, which tends to 1/s in the left tail."""

    family = BackgroundFamily.LOGISTIC
    stdev_per_scale = math.pi / math.sqrt(3.0)

    @staticmethod
    def _frozen(loc: float, scale: float):
        return stats.logistic(loc=loc, scale=scale)

    def logcdf(self, a):
        return log_expit(self._z(a))

    def logsf(self, a):
        return log_expit(-self._z(a))

    def integrated_cdf(self, a):
        return self._scale * np.logaddexp(0.0, self._z(a))

    def log_integrated_cdf(self, a):
        z = self._z(a)
        tail = z + np.log1p(-0.5 * np.exp(np.minimum(z, _SOFTPLUS_TAIL_Z)))
        with np.errstate(divide="ignore"):
            bulk = np.log(np.logaddexp(0.0, np.maximum(z, _SOFTPLUS_TAIL_Z)))
        return math.log(self._scale) + np.where(z < _SOFTPLUS_TAIL_Z, tail, bulk)

    def log_density_derivative(self, a, side: str = "right"):
        return -np.tanh(0.5 * self._z(a)) / self._scale

    def left_tail_rate(self) -> float:
        return 1.0 / self._scale

    def right_tail_rate(self) -> float:
        return 1.0 / self._scale

    def log_derivative_sup(self, floor=None):
        if floor is None:
            return 1.0 / self._scale, -math.inf
        return float(self.log_density_derivative(floor)), float(floor)

    def density_ratio_sup(self):
        return 1.0 / self._scale, -math.inf
