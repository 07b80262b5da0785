"""Base class for all background-risk distributions."""

import logging
import math
from typing import Optional

import numpy as np

from .constant import (
    LOGGER_NAME,
    SIZE_GRID_POINTS,
    SIZE_GRID_QUANTILE_LOW,
    SIZE_GRID_QUANTILE_HIGH,
    SIZE_COMPARISON_TOLERANCE,
    CPT_QUANTILE_LOW,
    CPT_QUANTILE_HIGH,
    CPT_MIN_POINTS,
    BackgroundFamily,
)
from .helpers import Helpers
from .models import (
    DiscretizedLottery,
    InputValidationError,
    InvalidDistributionError,
    NonPositiveScaleError,
    SizeReport,
)

_LOGGER = logging.getLogger(LOGGER_NAME)


class PyBgRiskBackgroundBase:
    """Base class for all background risks W with a full-support density g.

    Subclasses supply the density accessors; size indices fall back to a
    quantile grid with local refinement when no closed form is available."""

    family: BackgroundFamily = None

    def __repr__(self):
        return f"<{self.__class__.__name__}:{self.to_dict()}>"

    # Density accessors -------------------------------------------------------

    def pdf(self, a):
        """Density g(a)."""
        return np.exp(self.logpdf(a))

    def logpdf(self, a):
        raise NotImplementedError

    def cdf(self, a):
        """G(a) = P(W <= a)."""
        raise NotImplementedError

    def sf(self, a):
        """1 - G(a)."""
        return 1.0 - self.cdf(a)

    def logcdf(self, a):
        with np.errstate(divide="ignore"):
            return np.log(self.cdf(a))

    def logsf(self, a):
        with np.errstate(divide="ignore"):
            return np.log(self.sf(a))

    def quantile(self, q):
        raise NotImplementedError

    def integrated_cdf(self, a):
        """u_G(a), the integral of G from minus infinity to a."""
        raise NotImplementedError

    def log_integrated_cdf(self, a):
        with np.errstate(divide="ignore"):
            return np.log(self.integrated_cdf(a))

    def log_density_derivative(self, a, side: str = "right"):
        """g'(a)/g(a); `side` picks the one-sided limit at kink points."""
        raise NotImplementedError

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def stdev(self) -> float:
        raise NotImplementedError

    def kink_points(self) -> np.ndarray:
        """Points where g is not differentiable."""
        return np.empty(0)

    def left_tail_rate(self) -> float:
        """Limit of g'/g as a goes to minus infinity (+inf for thin tails)."""
        raise NotImplementedError

    def right_tail_rate(self) -> float:
        """Limit of -g'/g as a goes to plus infinity (+inf for thin tails)."""
        raise NotImplementedError

    # Constructors ------------------------------------------------------------

    def scaled(self, t: float) -> "PyBgRiskBackgroundBase":
        """The law of tW."""
        raise NotImplementedError

    def shifted(self, c: float) -> "PyBgRiskBackgroundBase":
        """The law of W + c."""
        raise NotImplementedError

    def reflected(self) -> "PyBgRiskBackgroundBase":
        """The law of -W."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def _check_scale_factor(t: float):
        if not (math.isfinite(t) and t > 0.0):
            raise NonPositiveScaleError(f"scale factor must be positive, got {t!r}")

    # Grids -------------------------------------------------------------------

    def quantile_grid(self, points: int = SIZE_GRID_POINTS,
                      low: float = SIZE_GRID_QUANTILE_LOW,
                      high: float = SIZE_GRID_QUANTILE_HIGH) -> np.ndarray:
        """Points uniform in probability, mapped through the quantile function."""
        grid = np.asarray(self.quantile(np.linspace(low, high, points)), dtype=float)
        return Helpers.merge_points(grid, self.kink_points())

    def grid_sup(self, ratio, floor: Optional[float] = None) -> tuple[float, float]:
        """Grid-plus-refinement supremum of ratio(a) over the bulk of W (and a >= floor)."""
        grid = self.quantile_grid()
        if floor is not None:
            grid = Helpers.merge_points(grid[grid >= floor], [floor])
            if grid.size == 1:
                grid = np.array([floor, floor + max(self.stdev, 1.0)])
        values = np.asarray(ratio(grid), dtype=float)
        best_a, best_value = Helpers.refine_maximum(lambda a: float(ratio(np.array([a]))[0]),
                                                    grid, values)
        _LOGGER.debug("%s:grid_sup: %s at a=%s over %d points",
                      self.__class__.__name__, best_value, best_a, grid.size)
        return best_value, best_a

    # Size indices ------------------------------------------------------------

    def log_derivative_sup(self, floor: Optional[float] = None) -> tuple[float, Optional[float]]:
        """sup of g'/g (over a >= floor when given) and where it is attained."""
        value, where = self.grid_sup(lambda a: self.log_density_derivative(a, side="left"), floor)
        if floor is None and self.left_tail_rate() > value:
            return self.left_tail_rate(), -math.inf
        return value, where

    def density_ratio_sup(self) -> tuple[float, Optional[float]]:
        """sup of g/G and where it is attained."""
        value, where = self.grid_sup(lambda a: np.exp(self.logpdf(a) - self.logcdf(a)))
        if self.left_tail_rate() > value:
            return self.left_tail_rate(), -math.inf
        return value, where

    @staticmethod
    def _inverse(sup: float) -> float:
        if math.isinf(sup) and sup > 0:
            return 0.0
        if sup <= 0.0:
            return math.inf
        return 1.0 / sup

    def exp_size(self) -> float:
        """S(W) = (sup g'/g)^-1."""
        return self._inverse(self.log_derivative_sup()[0])

    def exp_size_two_sided(self) -> float:
        """S*(W) = (sup |g'/g|)^-1 = min(S(W), S(-W))."""
        return min(self.exp_size(), self.reflected().exp_size())

    def exp_size_second_order(self) -> float:
        """S2(W) = (sup g/G)^-1."""
        return self._inverse(self.density_ratio_sup()[0])

    def limited_liability_size(self, floor: float) -> float:
        """(sup over a >= floor of g'/g)^-1; +inf when that supremum is not positive."""
        return self._inverse(self.log_derivative_sup(floor)[0])

    def is_exactly_s_dominant(self, s: float) -> bool:
        """True iff a -> g(a) exp(-a/s) is nonincreasing."""
        if not s > 0.0:
            raise InputValidationError(f"s must be positive, got {s!r}")
        sup = self.log_derivative_sup()[0]
        return sup * s <= 1.0 + SIZE_COMPARISON_TOLERANCE

    def size_report(self) -> SizeReport:
        left, left_at = self.log_derivative_sup()
        right, right_at = self.reflected().log_derivative_sup()
        second, second_at = self.density_ratio_sup()
        if right > left:
            two_sided_at = -right_at if right_at is not None else None
        else:
            two_sided_at = left_at
        return SizeReport(
            s_left=self._inverse(left),
            s_two_sided=min(self._inverse(left), self._inverse(right)),
            s_second_order=self._inverse(second),
            argsup_left=left_at,
            argsup_two_sided=two_sided_at,
            argsup_second_order=second_at,
        )

    # Discretization ----------------------------------------------------------

    def discretize(self, n_points: int,
                   low: float = CPT_QUANTILE_LOW,
                   high: float = CPT_QUANTILE_HIGH) -> DiscretizedLottery:
        """Quantile-midpoint discretization.

        n_points - 2 equal-mass cells cover [low, high] in probability, each placed at
        the quantile of its midpoint; the two tails become atoms at their own midpoints."""
        if n_points < CPT_MIN_POINTS:
            raise InputValidationError(f"discretization needs at least {CPT_MIN_POINTS} points")
        cells = n_points - 2
        cell_mass = (high - low) / cells
        mids = low + cell_mass * (np.arange(cells) + 0.5)
        probabilities = np.concatenate(([low], np.full(cells, cell_mass), [1.0 - high]))
        levels = np.concatenate(([0.5 * low], mids, [high + 0.5 * (1.0 - high)]))
        support = np.asarray(self.quantile(levels), dtype=float)
        probabilities = probabilities / math.fsum(probabilities.tolist())
        _LOGGER.debug("%s:discretize: %d points on [%s, %s]",
                      self.__class__.__name__, n_points, support[0], support[-1])
        return DiscretizedLottery(support, probabilities)


def _check_distribution(w) -> PyBgRiskBackgroundBase:
    if not isinstance(w, PyBgRiskBackgroundBase):
        raise InvalidDistributionError(f"not a background risk: {w!r}")
    return w


def exp_size(w: PyBgRiskBackgroundBase) -> float:
    return _check_distribution(w).exp_size()


def exp_size_two_sided(w: PyBgRiskBackgroundBase) -> float:
    return _check_distribution(w).exp_size_two_sided()


def exp_size_second_order(w: PyBgRiskBackgroundBase) -> float:
    return _check_distribution(w).exp_size_second_order()


def limited_liability_size(w: PyBgRiskBackgroundBase, floor: float) -> float:
    return _check_distribution(w).limited_liability_size(floor)


def is_exactly_s_dominant_family(w: PyBgRiskBackgroundBase, s: float) -> bool:
    return _check_distribution(w).is_exactly_s_dominant(s)


def size_report(w: PyBgRiskBackgroundBase) -> SizeReport:
    return _check_distribution(w).size_report()


class PyBgRiskLocationScaleBase(PyBgRiskBackgroundBase):
    """Symmetric location-scale family backed by a frozen scipy.stats distribution."""

    stdev_per_scale: float = 1.0
    """stdev / scale for the family"""

    def __init__(self, loc: float, scale: float):
        loc, scale = float(loc), float(scale)
        if not math.isfinite(loc):
            raise InvalidDistributionError(f"location must be finite, got {loc!r}")
        if not (math.isfinite(scale) and scale > 0.0):
            raise InvalidDistributionError(f"scale must be positive and finite, got {scale!r}")
        self._loc = loc
        self._scale = scale
        self._dist = self._frozen(loc, scale)

    @staticmethod
    def _frozen(loc: float, scale: float):
        raise NotImplementedError

    @classmethod
    def from_stdev(cls, mu: float, sigma: float):
        """Build the family member with mean mu and standard deviation sigma."""
        if not (math.isfinite(sigma) and sigma > 0.0):
            raise InvalidDistributionError(f"sigma must be positive and finite, got {sigma!r}")
        return cls(mu, sigma / cls.stdev_per_scale)

    @property
    def loc(self) -> float:
        return self._loc

    @property
    def scale(self) -> float:
        return self._scale

    @property
    def mean(self) -> float:
        return self._loc

    @property
    def stdev(self) -> float:
        return self._scale * self.stdev_per_scale

    def _z(self, a):
        return (np.asarray(a, dtype=float) - self._loc) / self._scale

    def pdf(self, a):
        return self._dist.pdf(a)

    def logpdf(self, a):
        return self._dist.logpdf(a)

    def cdf(self, a):
        return self._dist.cdf(a)

    def sf(self, a):
        return self._dist.sf(a)

    def logcdf(self, a):
        return self._dist.logcdf(a)

    def logsf(self, a):
        return self._dist.logsf(a)

    def quantile(self, q):
        return self._dist.ppf(q)

    def scaled(self, t: float):
        self._check_scale_factor(t)
        return self.__class__(t * self._loc, t * self._scale)

    def shifted(self, c: float):
        return self.__class__(self._loc + c, self._scale)

    def reflected(self):
        return self.__class__(-self._loc, self._scale)

    def to_dict(self) -> dict:
        return {"family": str(self.family), "loc": self._loc, "scale_or_sigma": self._scale}
