"""Normal background risk."""

import logging
import math

import numpy as np
from scipy import stats
from scipy.special import erfcx

from .constant import LOGGER_NAME, BackgroundFamily
from .pybgriskbackgroundbase import PyBgRiskLocationScaleBase

_LOGGER = logging.getLogger(LOGGER_NAME)

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
# Left of z = -1 u_G is phi(z) * h(-z); h switches to its asymptotic series past t = 100.
_TAIL_Z = -1.0
_SERIES_T = 100.0


def _tail_factor(t):
    """h(t) = 1 - t * Phi(-t) / phi(t), the left-tail factor of u_G / (sigma phi)."""
    t = np.asarray(t, dtype=float)
    safe = np.minimum(t, _SERIES_T)
    direct = 1.0 - safe * math.sqrt(0.5 * math.pi) * erfcx(safe / math.sqrt(2.0))
    big = np.maximum(t, _SERIES_T)
    inv2 = 1.0 / (big * big)
    series = inv2 * (1.0 - inv2 * (3.0 - inv2 * (15.0 - 105.0 * inv2)))
    return np.where(t < _SERIES_T, direct, series)


class PyBgRiskNormal(PyBgRiskLocationScaleBase):
    """Normal(mu, sigma). Both tails are thin, so every size index is 0."""

    family = BackgroundFamily.NORMAL
    stdev_per_scale = 1.0

    @staticmethod
    def _frozen(loc: float, scale: float):
        return stats.norm(loc=loc, scale=scale)

    def integrated_cdf(self, a):
        z = self._z(a)
        bulk = self._scale * (stats.norm.pdf(z) + z * stats.norm.cdf(z))
        tail = self._scale * stats.norm.pdf(z) * _tail_factor(-np.minimum(z, _TAIL_Z))
        return np.where(z < _TAIL_Z, tail, bulk)

    def log_integrated_cdf(self, a):
        z = self._z(a)
        with np.errstate(divide="ignore"):
            bulk = np.log(self.integrated_cdf(a))
            tail = (math.log(self._scale) - _LOG_SQRT_2PI - 0.5 * z * z
                    + np.log(_tail_factor(-np.minimum(z, _TAIL_Z))))
        return np.where(z < _TAIL_Z, tail, bulk)

    def log_density_derivative(self, a, side: str = "right"):
        return -self._z(a) / self._scale

    def left_tail_rate(self) -> float:
        return math.inf

    def right_tail_rate(self) -> float:
        return math.inf

    def log_derivative_sup(self, floor=None):
        if floor is None:
            return math.inf, -math.inf
        return (self._loc - float(floor)) / (self._scale * self._scale), float(floor)

    def density_ratio_sup(self):
        return math.inf, -math.inf
