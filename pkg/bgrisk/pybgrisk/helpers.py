"""Helper functions for PyBgRisk library."""

import logging
import math
import sys
from typing import Callable, Optional, Union

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from .constant import LOGGER_NAME

_LOGGER = logging.getLogger(LOGGER_NAME)

NUMERIC = Union[float, np.ndarray]

_LOG_FLOAT_MAX = math.log(sys.float_info.max)


class Helpers:
    """PyBgRisk Helper Functions."""

    @staticmethod
    def saturating_expm1(value: float) -> float:
        """exp(value) - 1, saturating to +inf where math.expm1 would overflow."""
        if value >= _LOG_FLOAT_MAX:
            return math.inf
        return math.expm1(value)

    @staticmethod
    def log_moment(values: np.ndarray, probabilities: np.ndarray, alpha: float) -> float:
        """ln E[exp(-alpha X)] in shifted-log form.

        logsumexp subtracts max(-alpha x) before exponentiating, so alpha * M may exceed 700."""
        if math.isinf(alpha):
            if np.min(values) < 0.0:
                return math.inf
            zero_mass = float(np.sum(probabilities[values == 0.0]))
            return math.log(zero_mass) if zero_mass > 0.0 else -math.inf
        return float(logsumexp(-alpha * values, b=probabilities))

    @staticmethod
    def bisect_predicate(
        predicate: Callable[[float], bool],
        false_at: float,
        true_at: float,
        resolution: float,
        relative: bool = False,
        max_steps: int = 200,
    ) -> tuple[float, float]:
        """Shrink [false_at, true_at] around the point where predicate flips.

        Works whichever end is larger. Returns the final (false_at, true_at) pair."""
        steps = 0
        while steps < max_steps:
            width = abs(true_at - false_at)
            limit = resolution * max(abs(true_at), abs(false_at)) if relative else resolution
            if width <= limit:
                break
            middle = 0.5 * (false_at + true_at)
            if predicate(middle):
                true_at = middle
            else:
                false_at = middle
            steps += 1
        _LOGGER.debug("Helpers:bisect_predicate: %d steps, bracket (%s, %s)",
                      steps, false_at, true_at)
        return false_at, true_at

    @staticmethod
    def expand_until(
        predicate: Callable[[float], bool],
        start: float,
        factor: float,
        ceiling: float,
    ) -> Optional[float]:
        """Multiply start by factor until predicate holds; None once ceiling is passed."""
        value = start
        while value <= ceiling:
            if predicate(value):
                return value
            value *= factor
        return None

    @staticmethod
    def refine_maximum(func: Callable[[float], float], grid: np.ndarray,
                       values: np.ndarray) -> tuple[float, float]:
        """Polish the grid argmax of func with a bounded scalar search between its neighbors."""
        finite = np.where(np.isfinite(values), values, -np.inf)
        index = int(np.argmax(finite))
        best_a, best_value = float(grid[index]), float(finite[index])
        lower = float(grid[max(index - 1, 0)])
        upper = float(grid[min(index + 1, grid.size - 1)])
        if upper > lower:
            result = minimize_scalar(lambda a: -func(a), bounds=(lower, upper), method="bounded",
                                     options={"xatol": 1e-10 * max(1.0, abs(best_a))})
            if result.success and -result.fun > best_value:
                best_a, best_value = float(result.x), float(-result.fun)
        return best_a, best_value

    @staticmethod
    def merge_points(*arrays) -> np.ndarray:
        """Sorted unique finite points from several arrays."""
        points = np.concatenate([np.atleast_1d(np.asarray(a, dtype=float)) for a in arrays])
        points = points[np.isfinite(points)]
        return np.unique(points)

    @staticmethod
    def densify(grid: np.ndarray, mask: np.ndarray, factor: int) -> np.ndarray:
        """New points splitting each interval next to a flagged grid point into `factor` parts."""
        if factor <= 1 or grid.size < 2:
            return np.empty(0)
        flagged = np.flatnonzero(mask)
        starts = np.unique(np.clip(np.concatenate((flagged - 1, flagged)), 0, grid.size - 2))
        if starts.size == 0:
            return np.empty(0)
        fractions = np.arange(1, factor) / factor
        left = grid[starts][:, None]
        right = grid[starts + 1][:, None]
        return (left + (right - left) * fractions[None, :]).ravel()

    @staticmethod
    def round_up(value: float) -> float:
        """Whole dollars, rounded up so a lower bound stays a bound."""
        return float(math.ceil(value - 1e-9))
