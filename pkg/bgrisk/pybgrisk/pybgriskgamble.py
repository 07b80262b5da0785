"""Finite gambles and the riskiness index."""

import logging
import math

from .constant import (
    LOGGER_NAME,
    RISKINESS_BISECTION_STEPS,
    RISKINESS_STOP_RESIDUAL,
    RISKINESS_RESIDUAL_TOLERANCE,
    RISKINESS_MAX_DOUBLINGS,
)
from .helpers import Helpers
from .models import (
    Gamble,
    RiskinessResult,
    NonPositiveMeanError,
    NoDownsideError,
    NonPositiveScaleError,
    BracketNotFoundError,
)

_LOGGER = logging.getLogger(LOGGER_NAME)


def mean(g: Gamble) -> float:
    """E[X]."""
    return math.fsum(x * p for x, p in g.outcomes)


def log_moment(g: Gamble, alpha: float) -> float:
    """ln E[exp(-alpha X)]."""
    return Helpers.log_moment(g.x, g.p, alpha)


def _require_positive_mean(g: Gamble) -> float:
    epsilon = mean(g)
    if not epsilon > 0.0:
        raise NonPositiveMeanError(f"gamble has non-positive mean {epsilon!r}")
    return epsilon


def riskiness(g: Gamble) -> RiskinessResult:
    """Solve E[exp(-X/R)] = 1 for R > 0 by bisection on alpha = 1/R."""
    epsilon = _require_positive_mean(g)
    if g.min_value >= 0.0:
        raise NoDownsideError("gamble never loses money; riskiness is undefined")

    support = g.support_bound
    x, p = g.x, g.p
    alpha_lo = epsilon / (support * support)
    # ln E[exp(-alpha X)] <= 0 at epsilon / M^2; rounding can push it just above.
    shrinks = 0
    while Helpers.log_moment(x, p, alpha_lo) > 0.0 and shrinks < 64:
        alpha_lo *= 0.5
        shrinks += 1

    alpha_hi = 2.0 * alpha_lo
    doublings = 0
    while Helpers.log_moment(x, p, alpha_hi) <= 0.0:
        alpha_lo = alpha_hi
        alpha_hi *= 2.0
        doublings += 1
        if doublings > RISKINESS_MAX_DOUBLINGS or math.isinf(alpha_hi):
            _LOGGER.error("riskiness: no upper bracket after %d doublings", doublings)
            raise BracketNotFoundError("could not bracket the riskiness root")
    _LOGGER.debug("riskiness: bracket alpha in (%s, %s) after %d doublings",
                  alpha_lo, alpha_hi, doublings)

    alpha = 0.5 * (alpha_lo + alpha_hi)
    iterations = 0
    for iterations in range(1, RISKINESS_BISECTION_STEPS + 1):
        alpha = 0.5 * (alpha_lo + alpha_hi)
        value = Helpers.log_moment(x, p, alpha)
        if abs(Helpers.saturating_expm1(value)) < RISKINESS_STOP_RESIDUAL:
            break
        if value > 0.0:
            alpha_hi = alpha
        else:
            alpha_lo = alpha

    residual = abs(Helpers.saturating_expm1(Helpers.log_moment(x, p, alpha)))
    if residual > RISKINESS_RESIDUAL_TOLERANCE:
        _LOGGER.error("riskiness: residual %s above tolerance", residual)
        raise BracketNotFoundError(f"riskiness residual {residual!r} above tolerance")

    result = RiskinessResult(riskiness=1.0 / alpha, alpha=alpha,
                             residual=residual, iterations=iterations)
    _LOGGER.debug("riskiness: R=%s after %d iterations (residual %s)",
                  result.riskiness, iterations, residual)
    return result


def riskiness_bound(g: Gamble) -> float:
    """M^2 / E[X], an upper bound on R(X)."""
    epsilon = _require_positive_mean(g)
    support = g.support_bound
    return support * support / epsilon


def scale(g: Gamble, t: float) -> Gamble:
    """The gamble tX."""
    if not (math.isfinite(t) and t > 0.0):
        raise NonPositiveScaleError(f"scale factor must be positive, got {t!r}")
    return Gamble.from_outcomes([(t * v, p) for v, p in g.outcomes], degenerate=g.degenerate)
