"""Background-risk standard deviations sufficient for dominance."""

import logging
import math
from typing import Optional

from .constant import (
    LOGGER_NAME,
    TABLE_GAMBLES,
    TABLE1_NORMAL_MU,
    TABLE1_LIABILITY,
    BackgroundFamily,
)
from .models import (
    Gamble,
    InputValidationError,
    NegativeHeadroomError,
    ThresholdRow,
)
from .pybgriskgamble import riskiness

_LOGGER = logging.getLogger(LOGGER_NAME)

LAPLACE_FACTOR = math.sqrt(2.0)
LOGISTIC_FACTOR = math.pi / math.sqrt(3.0)


def gamble_label(gain: float, loss: float) -> str:
    """Row label such as '110/100'."""
    return f"{gain:g}/{loss:g}"


def sigma_threshold_laplace(x: Gamble) -> float:
    """sigma >= sqrt(2) R(X)."""
    return LAPLACE_FACTOR * riskiness(x).riskiness


def sigma_threshold_logistic(x: Gamble) -> float:
    """sigma >= (pi / sqrt(3)) R(X)."""
    return LOGISTIC_FACTOR * riskiness(x).riskiness


def sigma_threshold_normal(x: Gamble, mu: float, ell: float) -> float:
    """sigma >= sqrt(R(X) (mu - ell + max[X])) under limited liability at ell."""
    headroom = mu - ell + x.max_value
    if not headroom > 0.0:
        raise NegativeHeadroomError(f"mu - ell + max[X] = {headroom!r} is not positive")
    return math.sqrt(riskiness(x).riskiness * headroom)


def sigma_threshold(x: Gamble, family: BackgroundFamily,
                    mu: Optional[float] = None, ell: Optional[float] = None) -> float:
    """Dispatch on the family; the Normal bound needs mu and ell."""
    family = BackgroundFamily(family)
    if family == BackgroundFamily.LAPLACE:
        return sigma_threshold_laplace(x)
    if family == BackgroundFamily.LOGISTIC:
        return sigma_threshold_logistic(x)
    if family == BackgroundFamily.NORMAL:
        if mu is None or ell is None:
            raise InputValidationError("the normal threshold needs both mu and ell")
        return sigma_threshold_normal(x, mu, ell)
    raise InputValidationError(f"no closed-form threshold for family {family}")


def threshold_row(gain: float, loss: float, mu: Optional[float] = TABLE1_NORMAL_MU,
                  ell: Optional[float] = TABLE1_LIABILITY) -> ThresholdRow:
    """One fifty-fifty gamble's thresholds."""
    x = Gamble.fifty_fifty(gain, loss)
    with_normal = mu is not None and ell is not None
    row = ThresholdRow(
        label=gamble_label(gain, loss),
        gain=gain,
        loss=loss,
        sigma_laplace=sigma_threshold_laplace(x),
        sigma_logistic=sigma_threshold_logistic(x),
        sigma_normal=sigma_threshold_normal(x, mu, ell) if with_normal else None,
        normal_mu=mu if with_normal else None,
        ell=ell if with_normal else None,
    )
    _LOGGER.debug("threshold_row: %s", row)
    return row


def table1(mu: Optional[float] = TABLE1_NORMAL_MU,
           ell: Optional[float] = TABLE1_LIABILITY) -> list[ThresholdRow]:
    """Sufficient sigmas for the five standard fifty-fifty gambles."""
    return [threshold_row(gain, loss, mu, ell) for gain, loss in TABLE_GAMBLES]
