"""Stochastic dominance of W + X over W (or over W + Y)."""

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy.special import logsumexp

from .constant import (
    LOGGER_NAME,
    DOMINANCE_GRID_QUANTILE_LOW,
    DOMINANCE_GRID_QUANTILE_HIGH,
    MARGIN_TOLERANCE,
    MIN_MASS_ABOVE_LIABILITY,
    SCALE_BISECTION_STEPS,
    Verdict,
    Method,
    DominanceOrder,
    MarginKind,
)
from .helpers import Helpers
from .models import (
    DominanceReport,
    Gamble,
    GridConfig,
    GridMeta,
    InfiniteMeanError,
    NoDownsideError,
    NonPositiveMeanError,
)
from .pybgriskbackgroundbase import PyBgRiskBackgroundBase
from .pybgriskgamble import mean, riskiness

_LOGGER = logging.getLogger(LOGGER_NAME)

_ZERO = Gamble.constant(0.0)
_TAIL_WALK_STEPS = 64


def _log_moment_ratio(x: Gamble, y: Gamble, alpha: float) -> float:
    """ln E[exp(-alpha X)] - ln E[exp(-alpha Y)], with the infinite-alpha limits."""
    if math.isinf(alpha):
        if alpha > 0:
            gx, gy = x.min_value, y.min_value
            px, py = x.probabilities[0], y.probabilities[0]
            if gx != gy:
                return math.inf if gx < gy else -math.inf
        else:
            gx, gy = x.max_value, y.max_value
            px, py = x.probabilities[-1], y.probabilities[-1]
            if gx != gy:
                return math.inf if gx > gy else -math.inf
        return math.log(px / py)
    return Helpers.log_moment(x.x, x.p, alpha) - Helpers.log_moment(y.x, y.p, alpha)


def left_tail_coefficient(w: PyBgRiskBackgroundBase, x: Gamble, y: Gamble = _ZERO) -> float:
    """Limit of 1 - E[G(a - X)] / E[G(a - Y)] as a goes to minus infinity."""
    return -Helpers.saturating_expm1(_log_moment_ratio(x, y, w.left_tail_rate()))


def right_tail_coefficient(w: PyBgRiskBackgroundBase, x: Gamble, y: Gamble = _ZERO) -> float:
    """Limit of E[1 - G(a - X)] / E[1 - G(a - Y)] - 1 as a goes to plus infinity."""
    return Helpers.saturating_expm1(_log_moment_ratio(x, y, -w.right_tail_rate()))


def _expected(fn, a: np.ndarray, g: Gamble) -> np.ndarray:
    """E[fn(a - G)] for every a, as a fixed-order matrix product."""
    return fn(np.subtract.outer(a, g.x)) @ g.p


def _log_expected(fn, a: np.ndarray, g: Gamble) -> np.ndarray:
    return logsumexp(fn(np.subtract.outer(a, g.x)), b=g.p, axis=-1)


def cdf_margin(w: PyBgRiskBackgroundBase, a, x: Gamble, y: Gamble = _ZERO) -> np.ndarray:
    """P(W + Y <= a) - P(W + X <= a); survival form where the CDF is above one half."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    lower = _expected(w.cdf, a, y) - _expected(w.cdf, a, x)
    upper = _expected(w.sf, a, x) - _expected(w.sf, a, y)
    return np.where(w.cdf(a) <= 0.5, lower, upper)


def integrated_margin(w: PyBgRiskBackgroundBase, a, x: Gamble, y: Gamble = _ZERO) -> np.ndarray:
    """E[u_G(a - Y)] - E[u_G(a - X)]."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    return _expected(w.integrated_cdf, a, y) - _expected(w.integrated_cdf, a, x)


def _base_grid(w: PyBgRiskBackgroundBase, x: Gamble, y: Gamble,
               lower: Optional[float], config: GridConfig) -> tuple[np.ndarray, float, float]:
    levels = np.linspace(DOMINANCE_GRID_QUANTILE_LOW, DOMINANCE_GRID_QUANTILE_HIGH, config.points)
    bulk = np.asarray(w.quantile(levels), dtype=float)
    reach = max(x.support_bound, y.support_bound)
    lo, hi = float(bulk[0] - reach), float(bulk[-1] + reach)
    if lower is not None:
        lo = max(lo, lower)
        hi = max(hi, lower + max(reach, 1.0))
    shifts = np.unique([0.0, x.min_value, x.max_value, y.min_value, y.max_value])
    kinks = w.kink_points()
    grid = Helpers.merge_points(
        np.add.outer(bulk, shifts).ravel(),
        np.linspace(lo, hi, config.linear_points),
        np.add.outer(kinks, np.concatenate((x.x, y.x))).ravel(),
        kinks,
        [lo, hi],
    )
    return grid[(grid >= lo) & (grid <= hi)], lo, hi


def _scan(margin: Callable, grid: np.ndarray, config: GridConfig) -> tuple[np.ndarray, np.ndarray, int]:
    """Evaluate the margin on the grid, densifying near small margins at minima and sign changes."""
    values = margin(grid)
    passes = 0
    for _ in range(config.refinement_passes):
        small = np.abs(values) < config.refinement_threshold
        interior_min = np.zeros_like(small)
        if values.size > 2:
            interior_min[1:-1] = (values[1:-1] <= values[:-2]) & (values[1:-1] <= values[2:])
        sign_change = np.zeros_like(small)
        flips = np.signbit(values[1:]) != np.signbit(values[:-1])
        sign_change[:-1] |= flips
        sign_change[1:] |= flips
        mask = small & (interior_min | sign_change)
        mask[int(np.argmin(values))] = True
        extra = Helpers.densify(grid, mask, config.refinement_factor)
        if extra.size == 0:
            break
        grid = np.concatenate((grid, extra))
        values = np.concatenate((values, margin(extra)))
        order = np.argsort(grid, kind="stable")
        grid, values = grid[order], values[order]
        passes += 1
    return grid, values, passes


def _walk_tail(log_fn: Callable, x: Gamble, y: Gamble, start: float, unit: float,
               direction: float, tolerance: float,
               limit: Optional[float] = None) -> Optional[tuple[float, float]]:
    """Step away from the grid until the log-ratio margin is below -tolerance.

    Left tail: ln E[F(a - Y)] - ln E[F(a - X)], F the CDF or its integral. Right tail:
    ln E[S(a - X)] - ln E[S(a - Y)], S the survival function. A leftward walk stops at
    `limit`. Returns (a, log-ratio margin) for the first such a, or None."""
    for k in range(_TAIL_WALK_STEPS):
        point = start + direction * unit * 2.0 ** k
        at_limit = limit is not None and point <= limit
        a = np.array([limit if at_limit else point])
        log_x = float(_log_expected(log_fn, a, x)[0])
        log_y = float(_log_expected(log_fn, a, y)[0])
        if not (math.isfinite(log_x) and math.isfinite(log_y)):
            continue
        log_margin = log_y - log_x if direction < 0 else log_x - log_y
        if log_margin < -tolerance:
            _LOGGER.debug("tail walk: witness a=%s log-ratio margin %s after %d steps",
                          float(a[0]), log_margin, k + 1)
            return float(a[0]), log_margin
        if at_limit:
            break
    return None


def _verify(x: Gamble, y: Gamble, w: PyBgRiskBackgroundBase, order: DominanceOrder,
            lower: Optional[float] = None, config: Optional[GridConfig] = None,
            sufficient_condition: Optional[bool] = None) -> DominanceReport:
    """Grid verification of W + X over W + Y, closed in both tails analytically."""
    config = config or GridConfig()
    grid, lo, hi = _base_grid(w, x, y, lower, config)
    if order == DominanceOrder.FIRST:
        tolerance = config.tolerance
        margin = lambda a: cdf_margin(w, a, x, y)  # noqa: E731
        left_log = w.logcdf
    else:
        tolerance = config.tolerance * max(1.0, w.stdev)
        margin = lambda a: integrated_margin(w, a, x, y)  # noqa: E731
        left_log = w.log_integrated_cdf

    grid, values, passes = _scan(margin, grid, config)
    index = int(np.argmin(values))
    worst, witness = float(values[index]), float(grid[index])
    meta = GridMeta(points=int(grid.size), refinement_passes=passes, lower=lo, upper=hi)
    _LOGGER.debug("%s-order grid: %d points, %d passes, worst margin %s at a=%s",
                  order, grid.size, passes, worst, witness)

    left = left_tail_coefficient(w, x, y)
    right = right_tail_coefficient(w, x, y)
    left_open = lower is None or lower < lo
    tail = left if left_open else None

    def report(verdict: Verdict, margin_value: float, at: Optional[float],
               kind: MarginKind = MarginKind.ABSOLUTE) -> DominanceReport:
        _LOGGER.info("%s-order dominance: %s (%s margin %s at a=%s)",
                     order, verdict, kind, margin_value, at)
        return DominanceReport(verdict=verdict, worst_margin=margin_value, witness_a=at,
                               method=Method.GRID_VERIFICATION, grid_meta=meta, order=order,
                               sufficient_condition=sufficient_condition, tail_coefficient=tail,
                               margin_kind=kind)

    if worst < -tolerance:
        return report(Verdict.NOT_DOMINANT, worst, witness)

    unit = max(w.stdev, x.support_bound, y.support_bound, 1.0)
    if left_open and left < -MARGIN_TOLERANCE:
        _LOGGER.debug("left tail coefficient %s is negative", left)
        found = _walk_tail(left_log, x, y, lo, unit, -1.0, MARGIN_TOLERANCE, limit=lower)
        if found is not None:
            return report(Verdict.NOT_DOMINANT, found[1], found[0], MarginKind.LOG_RATIO)
        # The limit only decides the verdict when the tail is unbounded.
        if lower is None:
            limit_margin = -_log_moment_ratio(x, y, w.left_tail_rate())
            return report(Verdict.NOT_DOMINANT, limit_margin, lo, MarginKind.LOG_RATIO)

    mass_above = True if lower is None else float(w.sf(lower)) >= MIN_MASS_ABOVE_LIABILITY
    if order == DominanceOrder.FIRST and right < -MARGIN_TOLERANCE and mass_above:
        _LOGGER.debug("right tail coefficient %s is negative", right)
        found = _walk_tail(w.logsf, x, y, hi, unit, 1.0, MARGIN_TOLERANCE)
        if found is not None:
            return report(Verdict.NOT_DOMINANT, found[1], found[0], MarginKind.LOG_RATIO)
        limit_margin = _log_moment_ratio(x, y, -w.right_tail_rate())
        return report(Verdict.NOT_DOMINANT, limit_margin, hi, MarginKind.LOG_RATIO)

    if lower is None and mean(x) <= mean(y):
        if x.values == y.values and x.probabilities == y.probabilities:
            return report(Verdict.DOMINANT, worst, witness)
        gap = mean(x) - mean(y)
        _LOGGER.warning("grid is clean but E[X] - E[Y] = %s; reporting the mean gap", gap)
        if gap < -MARGIN_TOLERANCE:
            return report(Verdict.NOT_DOMINANT, gap, witness, MarginKind.MEAN)
        return report(Verdict.NOT_DOMINANT, worst, witness)

    return report(Verdict.DOMINANT, worst, witness)


def fosd_theorem_check(x: Gamble, w: PyBgRiskBackgroundBase) -> DominanceReport:
    """Sufficient condition R(X) <= S(W). Never concludes NotDominant."""
    r = riskiness(x).riskiness
    size = w.exp_size()
    met = r <= size
    _LOGGER.debug("fosd_theorem_check: R=%s S=%s", r, size)
    return DominanceReport(
        verdict=Verdict.SUFFICIENT_CONDITION_MET if met else Verdict.INCONCLUSIVE,
        worst_margin=size - r,
        witness_a=None,
        method=Method.THEOREM_BOUND,
        order=DominanceOrder.FIRST,
        sufficient_condition=met,
    )


def fosd_verify(x: Gamble, w: PyBgRiskBackgroundBase,
                config: Optional[GridConfig] = None) -> DominanceReport:
    """Check E[G(a - X)] <= G(a) for every a."""
    return _verify(x, _ZERO, w, DominanceOrder.FIRST, config=config)


def fosd_verify_pair(x: Gamble, y: Gamble, w: PyBgRiskBackgroundBase,
                     config: Optional[GridConfig] = None) -> DominanceReport:
    """Check P(W + X <= a) <= P(W + Y <= a) for every a."""
    return _verify(x, y, w, DominanceOrder.FIRST, config=config)


def fosd_check(x: Gamble, w: PyBgRiskBackgroundBase,
               config: Optional[GridConfig] = None) -> DominanceReport:
    """R(X) <= S(W) first; grid verification when it is not met."""
    try:
        report = fosd_theorem_check(x, w)
    except (NonPositiveMeanError, NoDownsideError) as exc:
        _LOGGER.debug("fosd_check: theorem check not applicable (%s)", exc)
        return fosd_verify(x, w, config)
    if report.verdict == Verdict.SUFFICIENT_CONDITION_MET:
        return report
    return fosd_verify(x, w, config)


def fosd_verify_limited_liability(x: Gamble, w: PyBgRiskBackgroundBase, ell: float,
                                  config: Optional[GridConfig] = None) -> DominanceReport:
    """Dominance of the truncated wealths: checked only for a >= ell."""
    try:
        r = riskiness(x).riskiness
        size = w.limited_liability_size(ell - x.max_value)
        sufficient = r <= size
        _LOGGER.debug("limited liability: R=%s, size above %s is %s", r, ell - x.max_value, size)
    except (NonPositiveMeanError, NoDownsideError):
        sufficient = None
    report = _verify(x, _ZERO, w, DominanceOrder.FIRST, lower=ell, config=config,
                     sufficient_condition=sufficient)
    if sufficient and not report.is_dominant:
        _LOGGER.warning("limited-liability sufficient condition holds but grid says %s",
                        report.verdict)
    return report


def sosd_verify(x: Gamble, w: PyBgRiskBackgroundBase,
                config: Optional[GridConfig] = None) -> DominanceReport:
    """Check E[u_G(a - X)] <= u_G(a) for every a."""
    r = riskiness(x).riskiness
    if not math.isfinite(w.mean):
        raise InfiniteMeanError("background risk has no finite mean")
    sufficient = r <= w.exp_size_second_order()
    report = _verify(x, _ZERO, w, DominanceOrder.SECOND, config=config,
                     sufficient_condition=sufficient)
    if sufficient and not report.is_dominant:
        _LOGGER.warning("R(X) <= S2(W) but the second-order grid says %s", report.verdict)
    return report


def dominant_scale_bound(x: Gamble, w: PyBgRiskBackgroundBase,
                         ell: Optional[float] = None) -> float:
    """Largest t for which accepting tX is dominant by the size criterion."""
    r = riskiness(x).riskiness
    if ell is None:
        size = w.exp_size()
        return math.inf if math.isinf(size) else size / r

    top = x.max_value

    def holds(t: float) -> bool:
        return t * r <= w.limited_liability_size(ell - t * top)

    t_high = Helpers.expand_until(lambda t: not holds(t), 1.0, 2.0, 2.0 ** 200)
    if t_high is None:
        return math.inf
    t_low = t_high / 2.0
    steps = 0
    while not holds(t_low):
        t_low /= 2.0
        steps += 1
        if steps > 1000 or t_low == 0.0:
            return 0.0
    t_low, _ = Helpers.bisect_predicate(lambda t: not holds(t), t_low, t_high,
                                        resolution=2.0 ** -SCALE_BISECTION_STEPS, relative=True)
    _LOGGER.debug("dominant_scale_bound: t=%s with ell=%s", t_low, ell)
    return t_low
