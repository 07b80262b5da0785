"""Background Risk Library."""

# flake8: noqa
import logging

import voluptuous as vol

from .constant import *
from .helpers import Helpers
from .models import *
from .schemas import DISTRIBUTION_SCHEMA, GAMBLE_SCHEMA, PAIR_SCHEMA
from .pybgriskgamble import mean, log_moment, riskiness, riskiness_bound, scale
from .pybgriskbackgroundbase import (
    PyBgRiskBackgroundBase,
    PyBgRiskLocationScaleBase,
    exp_size,
    exp_size_two_sided,
    exp_size_second_order,
    limited_liability_size,
    is_exactly_s_dominant_family,
    size_report,
)
from .pybgrisklaplace import PyBgRiskLaplace
from .pybgrisklogistic import PyBgRiskLogistic
from .pybgrisknormal import PyBgRiskNormal
from .pybgriskpiecewise import PyBgRiskPiecewise
from .pybgriskdominance import (
    cdf_margin,
    integrated_margin,
    left_tail_coefficient,
    right_tail_coefficient,
    fosd_theorem_check,
    fosd_verify,
    fosd_verify_pair,
    fosd_check,
    fosd_verify_limited_liability,
    sosd_verify,
    dominant_scale_bound,
)
from .pybgriskthresholds import (
    gamble_label,
    sigma_threshold,
    sigma_threshold_laplace,
    sigma_threshold_logistic,
    sigma_threshold_normal,
    threshold_row,
    table1,
)
from .pybgriskcpt import (
    weight_gain,
    weight_loss,
    value_function,
    cpt_value,
    convolve,
    cpt_accepts,
    centered_background,
    cpt_sigma_threshold,
    cpt_table,
)
from .pybgrisktwogamble import (
    convex_order_margin,
    strong_convex_dominance,
    weighted_integral_criterion,
    min_s_for_dominance,
    two_sided_sufficiency,
)
from .pybgriskoracle import (
    mc_fosd_oracle,
    mc_sosd_oracle,
    brute_force_fosd,
    discretization_tolerance,
    truncated_eu_difference,
    rejection_sweep,
    small_negative_gamble_rejection,
)

_LOGGER = logging.getLogger(LOGGER_NAME)

BackgroundRisk = PyBgRiskBackgroundBase

_BACKGROUND_FAMILY_TO_CLASS = {
    BackgroundFamily.LAPLACE: PyBgRiskLaplace,
    BackgroundFamily.LOGISTIC: PyBgRiskLogistic,
    BackgroundFamily.NORMAL: PyBgRiskNormal,
    BackgroundFamily.PIECEWISE: PyBgRiskPiecewise,
}


def _validated(schema, document: dict, error_class, what: str) -> dict:
    try:
        return schema(document)
    except vol.Invalid as exc:
        raise error_class(f"invalid {what}: {exc}") from exc


def gamble_from_dict(document: dict) -> Gamble:
    """Gamble from {"outcomes": [{"x": .., "p": ..}, ...], "degenerate": bool}."""
    data = _validated(GAMBLE_SCHEMA, document, InvalidGambleError, "gamble")
    return Gamble.from_outcomes(
        [(o[VALUE_KEY], o[PROBABILITY_KEY]) for o in data[OUTCOMES_KEY]],
        degenerate=data[DEGENERATE_KEY])


def background_from_dict(document: dict) -> PyBgRiskBackgroundBase:
    """Distribution from its JSON form, through the family registry."""
    data = _validated(DISTRIBUTION_SCHEMA, document, InvalidDistributionError, "distribution")
    family = BackgroundFamily(data[FAMILY_KEY])
    background_class = _BACKGROUND_FAMILY_TO_CLASS.get(family)
    if background_class is None:
        raise InvalidDistributionError(f"unsupported family {family}")
    if family == BackgroundFamily.PIECEWISE:
        background = background_class(data[KNOTS_KEY], data[LOG_COEFFS_KEY])
    else:
        background = background_class(data[LOC_KEY], data[SCALE_OR_SIGMA_KEY])
    _LOGGER.debug("background_from_dict: built %r", background)
    return background


def background_from_stdev(family, mu: float, sigma: float) -> PyBgRiskBackgroundBase:
    """Named family member with mean mu and standard deviation sigma."""
    try:
        family = BackgroundFamily(family)
    except ValueError as exc:
        raise InvalidDistributionError(f"unknown family {family!r}") from exc
    if family == BackgroundFamily.PIECEWISE:
        raise InvalidDistributionError("piecewise backgrounds need knots and log coefficients")
    return _BACKGROUND_FAMILY_TO_CLASS[family].from_stdev(mu, sigma)


def pair_from_dict(document: dict) -> tuple[Gamble, Gamble]:
    """(X, Y) from {"x": <gamble>, "y": <gamble>}."""
    data = _validated(PAIR_SCHEMA, document, InvalidGambleError, "gamble pair")
    return gamble_from_dict(data[PAIR_X_KEY]), gamble_from_dict(data[PAIR_Y_KEY])
