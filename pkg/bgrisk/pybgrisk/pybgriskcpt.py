"""Cumulative prospect theory evaluation and the sigma needed for acceptance."""

import logging
import math
from typing import Optional

import numpy as np

from .constant import (
    LOGGER_NAME,
    CPT_DEFAULT_POINTS,
    CPT_SIGMA_CEILING,
    CPT_SIGMA_RESOLUTION,
    CPT_MONOTONE_CHECK_FACTORS,
    TABLE_GAMBLES,
    BackgroundFamily,
)
from .helpers import Helpers
from .models import (
    CptParams,
    CptThresholdRow,
    DiscretizedLottery,
    Gamble,
    InputValidationError,
    NoAcceptanceFoundError,
)
from .pybgriskbackgroundbase import PyBgRiskBackgroundBase
from .pybgrisklaplace import PyBgRiskLaplace
from .pybgrisklogistic import PyBgRiskLogistic
from .pybgrisknormal import PyBgRiskNormal
from .pybgriskthresholds import gamble_label

_LOGGER = logging.getLogger(LOGGER_NAME)

_CENTERED_FAMILIES = {
    BackgroundFamily.LAPLACE: PyBgRiskLaplace,
    BackgroundFamily.LOGISTIC: PyBgRiskLogistic,
    BackgroundFamily.NORMAL: PyBgRiskNormal,
}


def _weight(p, curvature: float):
    """p^c / (p^c + (1 - p)^c)^(1/c), exact at 0 and 1."""
    p = np.asarray(p, dtype=np.longdouble)
    inner = np.clip(p, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        pc = np.power(inner, curvature)
        qc = np.power(1.0 - inner, curvature)
        value = pc / np.power(pc + qc, 1.0 / curvature)
    return np.where(inner <= 0.0, 0.0, np.where(inner >= 1.0, 1.0, value))


def weight_gain(p, params: CptParams = CptParams()):
    """w+(p) with curvature gamma."""
    value = _weight(p, params.gamma)
    return float(value) if np.ndim(value) == 0 else value.astype(float)


def weight_loss(p, params: CptParams = CptParams()):
    """w-(p) with curvature delta."""
    value = _weight(p, params.delta)
    return float(value) if np.ndim(value) == 0 else value.astype(float)


def value_function(x, params: CptParams = CptParams()):
    """x^rho for gains, -lambda (-x)^rho for losses."""
    x = np.asarray(x, dtype=float)
    magnitude = np.power(np.abs(x), params.rho)
    return np.where(x >= 0.0, magnitude, -params.loss_aversion * magnitude)


def cpt_value(z: DiscretizedLottery, params: CptParams = CptParams()) -> float:
    """Rank-dependent value with reference point 0.

    Losses are weighted by cumulative probabilities from the bottom, gains by
    decumulative probabilities from the top."""
    support, probabilities = z.support, z.probabilities
    cumulative = np.cumsum(probabilities, dtype=np.longdouble)
    decumulative = np.cumsum(probabilities[::-1], dtype=np.longdouble)[::-1]
    before = np.concatenate(([np.longdouble(0.0)], cumulative[:-1]))
    after = np.concatenate((decumulative[1:], [np.longdouble(0.0)]))

    values = value_function(support, params)
    losses = support < 0.0
    gains = support > 0.0
    loss_weights = _weight(cumulative[losses], params.delta) - _weight(before[losses], params.delta)
    gain_weights = _weight(decumulative[gains], params.gamma) - _weight(after[gains], params.gamma)
    terms = np.concatenate((values[losses] * loss_weights.astype(float),
                            values[gains] * gain_weights.astype(float)))
    return math.fsum(terms.tolist())


def convolve(z: DiscretizedLottery, x: Gamble) -> DiscretizedLottery:
    """Law of Z + X for independent Z and X, sorted."""
    support = np.add.outer(z.support, x.x).ravel()
    probabilities = np.multiply.outer(z.probabilities, x.p).ravel()
    order = np.argsort(support, kind="stable")
    return DiscretizedLottery(support[order], probabilities[order])


def cpt_accepts(x: Gamble, w: Optional[PyBgRiskBackgroundBase], params: CptParams = CptParams(),
                n_points: int = CPT_DEFAULT_POINTS) -> bool:
    """V(W + X) >= V(W); w=None evaluates the gamble in isolation."""
    base = DiscretizedLottery.point(0.0) if w is None else w.discretize(n_points)
    with_gamble = convolve(base, x)
    before, after = cpt_value(base, params), cpt_value(with_gamble, params)
    _LOGGER.debug("cpt_accepts: V(W)=%s V(W+X)=%s", before, after)
    return after >= before


def centered_background(family: BackgroundFamily, sigma: float) -> PyBgRiskBackgroundBase:
    """Mean-zero member of a named family with standard deviation sigma."""
    family = BackgroundFamily(family)
    if family not in _CENTERED_FAMILIES:
        raise InputValidationError(f"prospect-theory thresholds need a named family, not {family}")
    return _CENTERED_FAMILIES[family].from_stdev(0.0, sigma)


def cpt_sigma_threshold(x: Gamble, family: BackgroundFamily, params: CptParams = CptParams(),
                        n_points: int = CPT_DEFAULT_POINTS) -> float:
    """Smallest sigma (to CPT_SIGMA_RESOLUTION) at which the gamble is accepted."""
    if cpt_accepts(x, None, params, n_points):
        _LOGGER.info("cpt_sigma_threshold: gamble accepted without background risk")
        return 0.0

    def accepts(sigma: float) -> bool:
        return cpt_accepts(x, centered_background(family, sigma), params, n_points)

    upper = Helpers.expand_until(accepts, 1.0, 2.0, CPT_SIGMA_CEILING)
    if upper is None:
        _LOGGER.error("cpt_sigma_threshold: no acceptance up to sigma=%s", CPT_SIGMA_CEILING)
        raise NoAcceptanceFoundError(f"no sigma up to {CPT_SIGMA_CEILING:g} makes the gamble acceptable")
    lower = upper / 2.0 if upper > 1.0 else 0.0
    _, sigma = Helpers.bisect_predicate(accepts, lower, upper, CPT_SIGMA_RESOLUTION)

    failed = [f for f in CPT_MONOTONE_CHECK_FACTORS if not accepts(sigma * f)]
    if failed:
        _LOGGER.warning("cpt_sigma_threshold: acceptance is not monotone above sigma=%s "
                        "(rejected at factors %s)", sigma, failed)
    _LOGGER.info("cpt_sigma_threshold: %s sigma=%s (%d points)", family, sigma, n_points)
    return sigma


def cpt_table(params: CptParams = CptParams(),
              n_points: int = CPT_DEFAULT_POINTS) -> list[CptThresholdRow]:
    """Prospect-theory thresholds for the five standard fifty-fifty gambles."""
    rows = []
    for gain, loss in TABLE_GAMBLES:
        x = Gamble.fifty_fifty(gain, loss)
        rows.append(CptThresholdRow(
            label=gamble_label(gain, loss),
            gain=gain,
            loss=loss,
            sigma_laplace=cpt_sigma_threshold(x, BackgroundFamily.LAPLACE, params, n_points),
            sigma_logistic=cpt_sigma_threshold(x, BackgroundFamily.LOGISTIC, params, n_points),
            sigma_normal=cpt_sigma_threshold(x, BackgroundFamily.NORMAL, params, n_points),
            points=n_points,
        ))
    return rows
