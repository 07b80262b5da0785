"""Choosing between two gambles X and Y in the presence of background risk."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constant import (
    LOGGER_NAME,
    PAIR_RELATIVE_TOLERANCE,
    MIN_S_RELATIVE_RESOLUTION,
    MIN_S_SCAN_POINTS,
    MIN_S_SCAN_DECADES,
    MIN_S_FLOOR_FACTOR,
    TWO_SIDED_SWEEP_RESOLUTION,
)
from .helpers import Helpers
from .models import (
    BracketNotFoundError,
    EqualMaximaError,
    Gamble,
    GridConfig,
    IdenticalDistributionsError,
    InputValidationError,
    MeanOrderViolatedError,
    PairReport,
)
from .pybgriskbackgroundbase import PyBgRiskBackgroundBase, _check_distribution
from .pybgriskdominance import fosd_verify_pair
from .pybgriskgamble import mean
from .pybgrisklaplace import PyBgRiskLaplace

_LOGGER = logging.getLogger(LOGGER_NAME)

_SWEEP_DOUBLINGS = 40


@dataclass(frozen=True)
class _KnotTable:
    """Both step CDFs on the union of their support points."""

    knots: np.ndarray
    difference: np.ndarray
    """F_Y - F_X on [knots[k], knots[k + 1])"""
    widths: np.ndarray


def _knot_table(x: Gamble, y: Gamble) -> _KnotTable:
    knots = Helpers.merge_points(x.x, y.x)
    difference = (y.cdf(knots) - x.cdf(knots))[:-1]
    return _KnotTable(knots=knots, difference=difference, widths=np.diff(knots))


def _check_distinct(x: Gamble, y: Gamble):
    if (x.x.shape == y.x.shape and np.array_equal(x.x, y.x)
            and np.allclose(x.p, y.p, rtol=0.0, atol=1e-15)):
        raise IdenticalDistributionsError("X and Y have the same distribution")


def _upper_integrals(table: _KnotTable) -> tuple[np.ndarray, np.ndarray]:
    """Integral of F_Y - F_X from each knot to infinity, and the sum of absolute pieces."""
    pieces = table.difference * table.widths
    integrals = np.append(np.cumsum(pieces[::-1])[::-1], 0.0)
    scales = np.append(np.cumsum(np.abs(pieces)[::-1])[::-1], 0.0)
    return integrals, scales


def _weighted_integrals(table: _KnotTable, s: float) -> tuple[np.ndarray, np.ndarray]:
    """exp(z_j / s) times the integral of (F_Y - F_X) exp(-z / s) from z_j to infinity.

    The normalisation keeps every exponent nonpositive."""
    starts = table.knots[:-1]
    offsets = starts[None, :] - table.knots[:, None]
    upper = np.triu(np.ones(offsets.shape, dtype=bool), k=0)
    offsets = np.where(upper, offsets, np.inf)
    pieces = table.difference * s * -np.expm1(-table.widths / s)
    terms = np.exp(-offsets / s) * pieces[None, :]
    return terms.sum(axis=1), np.abs(terms).sum(axis=1)


def _worst(values: np.ndarray, scales: np.ndarray, knots: np.ndarray,
           candidates: np.ndarray) -> tuple[float, float, np.ndarray]:
    relative = np.where(scales > 0.0, values / np.where(scales > 0.0, scales, 1.0), 0.0)
    index = np.flatnonzero(candidates)[int(np.argmin(relative[candidates]))]
    return float(values[index]), float(knots[index]), relative


def convex_order_margin(x: Gamble, y: Gamble) -> tuple[np.ndarray, np.ndarray]:
    """Knots and the upper-tail integral of F_Y - F_X at each of them."""
    table = _knot_table(x, y)
    integrals, _ = _upper_integrals(table)
    return table.knots, integrals


def strong_convex_dominance(x: Gamble, y: Gamble) -> PairReport:
    """max[X] > max[Y] and the upper-tail integral of F_Y - F_X is positive below max[X]."""
    _check_distinct(x, y)
    table = _knot_table(x, y)
    integrals, scales = _upper_integrals(table)
    candidates = table.knots < table.knots[-1]
    worst, witness, relative = _worst(integrals, scales, table.knots, candidates)
    verdict = bool(x.max_value > y.max_value
                   and np.all(relative[candidates] > PAIR_RELATIVE_TOLERANCE))
    _LOGGER.debug("strong_convex_dominance: %s, smallest integral %s at a=%s",
                  verdict, worst, witness)
    return PairReport(verdict=verdict, worst_margin=worst, witness_a=witness)


def _criterion(table: _KnotTable, s: float) -> tuple[bool, float, float]:
    values, scales = _weighted_integrals(table, s)
    worst, witness, relative = _worst(values, scales, table.knots,
                                      np.ones(table.knots.size, dtype=bool))
    verdict = bool(np.all(relative >= -PAIR_RELATIVE_TOLERANCE))
    if verdict and worst < 0.0:
        worst = 0.0
    return verdict, worst, witness


def weighted_integral_criterion(x: Gamble, y: Gamble, s: float) -> PairReport:
    """Integral of (F_Y - F_X) exp(-z/s) from a to infinity is nonnegative for every a."""
    if not (math.isfinite(s) and s > 0.0):
        raise InputValidationError(f"s must be positive and finite, got {s!r}")
    verdict, worst, witness = _criterion(_knot_table(x, y), s)
    _LOGGER.debug("weighted_integral_criterion: s=%s %s, worst %s at a=%s",
                  s, verdict, worst, witness)
    return PairReport(verdict=verdict, worst_margin=worst,
                      witness_a=None if verdict else witness, s_used=s)


def _scan_fallback(holds, s_star: float) -> float:
    """Check the criterion flips once around s_star on a log grid; rescan when it does not."""
    grid = s_star * np.logspace(-MIN_S_SCAN_DECADES, MIN_S_SCAN_DECADES, MIN_S_SCAN_POINTS)
    observed = np.array([holds(float(s)) for s in grid])
    below = grid < s_star * (1.0 - 1e-9)
    above = grid > s_star * (1.0 + 1e-9)
    if not (np.any(observed & below) or np.any(~observed & above)):
        return s_star
    _LOGGER.warning("weighted criterion is not monotone in s near %s; falling back to the scan",
                    s_star)
    failing = np.flatnonzero(~observed)
    if failing.size == 0:
        return float(grid[0])
    first = int(failing[-1]) + 1
    if first == grid.size:
        return s_star
    _, true_at = Helpers.bisect_predicate(holds, float(grid[first - 1]), float(grid[first]),
                                          resolution=MIN_S_RELATIVE_RESOLUTION, relative=True)
    return true_at


def min_s_for_dominance(x: Gamble, y: Gamble) -> float:
    """Smallest s at which the weighted criterion holds; inf without strong convex dominance."""
    if x.max_value == y.max_value:
        raise EqualMaximaError("max[X] equals max[Y]; minimal s is not defined")
    if not strong_convex_dominance(x, y).verdict:
        _LOGGER.debug("min_s_for_dominance: no strong convex dominance, s is infinite")
        return math.inf
    table = _knot_table(x, y)
    if np.all(table.difference >= 0.0):
        _LOGGER.debug("min_s_for_dominance: X first-order dominates Y, every s works")
        return 0.0

    def holds(s: float) -> bool:
        return _criterion(table, s)[0]

    unit = max(x.support_bound, y.support_bound, 1e-300)
    s_high = Helpers.expand_until(holds, unit, 2.0, unit * 2.0 ** 200)
    if s_high is None:
        _LOGGER.error("min_s_for_dominance: criterion never held up to %s", unit * 2.0 ** 200)
        raise BracketNotFoundError("weighted criterion never holds")
    s_low = s_high / 2.0
    while holds(s_low):
        s_low /= 2.0
        if s_low < MIN_S_FLOOR_FACTOR * unit:
            _LOGGER.warning("min_s_for_dominance: criterion holds down to %s", s_low)
            return 0.0
    _, s_star = Helpers.bisect_predicate(holds, s_low, s_high,
                                         resolution=MIN_S_RELATIVE_RESOLUTION, relative=True)
    s_star = _scan_fallback(holds, s_star)
    _LOGGER.info("min_s_for_dominance: s=%s", s_star)
    return s_star


def _laplace_sweep(x: Gamble, y: Gamble, config: Optional[GridConfig]) -> Optional[float]:
    """Smallest Laplace scale, and hence two-sided size, under which W + X dominates W + Y."""

    def dominant(scale: float) -> bool:
        return fosd_verify_pair(x, y, PyBgRiskLaplace(0.0, scale), config).is_dominant

    unit = max(x.support_bound, y.support_bound)
    high = Helpers.expand_until(dominant, unit, 2.0, unit * 2.0 ** _SWEEP_DOUBLINGS)
    if high is None:
        _LOGGER.warning("two_sided_sufficiency: no Laplace scale up to %s makes X dominant",
                        unit * 2.0 ** _SWEEP_DOUBLINGS)
        return None
    low = high / 2.0
    while dominant(low):
        low /= 2.0
        if low < MIN_S_FLOOR_FACTOR * unit:
            return 0.0
    _, high = Helpers.bisect_predicate(dominant, low, high,
                                       resolution=TWO_SIDED_SWEEP_RESOLUTION, relative=True)
    return high


def two_sided_sufficiency(x: Gamble, y: Gamble, w: PyBgRiskBackgroundBase,
                          config: Optional[GridConfig] = None) -> PairReport:
    """Grid verdict on W + X over W + Y, set against the two-sided size of W."""
    _check_distribution(w)
    if mean(x) <= mean(y):
        raise MeanOrderViolatedError("E[X] must exceed E[Y]")
    report = fosd_verify_pair(x, y, w, config)
    worst = report.worst_margin
    if report.is_dominant and worst < 0.0:
        worst = 0.0
    s_star = w.exp_size_two_sided()
    s_used = _laplace_sweep(x, y, config)
    sufficient = None if s_used is None else bool(s_star >= s_used)
    _LOGGER.info("two_sided_sufficiency: %s, S*=%s, swept s=%s", report.verdict, s_star, s_used)
    return PairReport(verdict=report.is_dominant, worst_margin=worst,
                      witness_a=report.witness_a, s_used=s_used, s_star=s_star,
                      s_star_sufficient=sufficient)
