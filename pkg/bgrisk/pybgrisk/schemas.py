"""Voluptuous schemas for the JSON documents read and written by bgrisk."""

import math

import voluptuous as vol

from .constant import (
    OUTCOMES_KEY,
    VALUE_KEY,
    PROBABILITY_KEY,
    DEGENERATE_KEY,
    FAMILY_KEY,
    LOC_KEY,
    SCALE_OR_SIGMA_KEY,
    KNOTS_KEY,
    LOG_COEFFS_KEY,
    PAIR_X_KEY,
    PAIR_Y_KEY,
    VERDICT_KEY,
    WORST_MARGIN_KEY,
    WITNESS_KEY,
    METHOD_KEY,
    BackgroundFamily,
    Verdict,
    Method,
    OracleOutcome,
    MarginKind,
)


def _finite(value):
    """Coerce to a finite float."""
    if isinstance(value, bool):
        raise vol.Invalid("expected a number, got a boolean")
    try:
        number = float(value)
    except (TypeError, ValueError) as exc:
        raise vol.Invalid(f"expected a number, got {value!r}") from exc
    if not math.isfinite(number):
        raise vol.Invalid(f"expected a finite number, got {value!r}")
    return number


def _real(value):
    """Any float, including infinities (reports may carry +inf sizes)."""
    if isinstance(value, bool):
        raise vol.Invalid("expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    raise vol.Invalid(f"expected a number, got {value!r}")


FINITE = vol.All(_finite)
REAL = vol.All(_real)
OPTIONAL_REAL = vol.Any(None, REAL)

OUTCOME_SCHEMA = vol.Schema({
    vol.Required(VALUE_KEY): FINITE,
    vol.Required(PROBABILITY_KEY): FINITE,
})

GAMBLE_SCHEMA = vol.Schema({
    vol.Required(OUTCOMES_KEY): vol.All([OUTCOME_SCHEMA], vol.Length(min=1)),
    vol.Optional(DEGENERATE_KEY, default=False): bool,
})

NAMED_DISTRIBUTION_SCHEMA = vol.Schema({
    vol.Required(FAMILY_KEY): vol.In([
        str(BackgroundFamily.LAPLACE),
        str(BackgroundFamily.LOGISTIC),
        str(BackgroundFamily.NORMAL),
    ]),
    vol.Required(LOC_KEY): FINITE,
    vol.Required(SCALE_OR_SIGMA_KEY): vol.All(FINITE, vol.Range(min=0.0, min_included=False)),
})

PIECEWISE_DISTRIBUTION_SCHEMA = vol.Schema({
    vol.Required(FAMILY_KEY): str(BackgroundFamily.PIECEWISE),
    vol.Required(KNOTS_KEY): vol.All([FINITE], vol.Length(min=1)),
    vol.Required(LOG_COEFFS_KEY): vol.All(
        [vol.All([FINITE], vol.Length(min=2, max=2))], vol.Length(min=2)),
})

DISTRIBUTION_SCHEMA = vol.Any(NAMED_DISTRIBUTION_SCHEMA, PIECEWISE_DISTRIBUTION_SCHEMA)

PAIR_SCHEMA = vol.Schema({
    vol.Required(PAIR_X_KEY): GAMBLE_SCHEMA,
    vol.Required(PAIR_Y_KEY): GAMBLE_SCHEMA,
})

# Output documents -----------------------------------------------------------

RISKINESS_SCHEMA = vol.Schema({
    vol.Required("riskiness"): REAL,
    vol.Required("alpha"): REAL,
    vol.Required("residual"): REAL,
    vol.Required("iterations"): int,
}, extra=vol.ALLOW_EXTRA)

SIZE_REPORT_SCHEMA = vol.Schema({
    vol.Required("s_left"): REAL,
    vol.Required("s_two_sided"): REAL,
    vol.Required("s_second_order"): REAL,
    vol.Required("argsup_left"): OPTIONAL_REAL,
    vol.Required("argsup_two_sided"): OPTIONAL_REAL,
    vol.Required("argsup_second_order"): OPTIONAL_REAL,
}, extra=vol.ALLOW_EXTRA)

DOMINANCE_REPORT_SCHEMA = vol.Schema({
    vol.Required(VERDICT_KEY): vol.In([str(v) for v in Verdict] + [str(o) for o in OracleOutcome]),
    vol.Required(WORST_MARGIN_KEY): REAL,
    vol.Required(WITNESS_KEY): OPTIONAL_REAL,
    vol.Required(METHOD_KEY): vol.In([str(m) for m in Method]),
    vol.Optional("margin_kind"): vol.In([str(k) for k in MarginKind]),
}, extra=vol.ALLOW_EXTRA)

PAIR_REPORT_SCHEMA = vol.Schema({
    vol.Required(VERDICT_KEY): bool,
    vol.Required(WORST_MARGIN_KEY): REAL,
    vol.Required(WITNESS_KEY): OPTIONAL_REAL,
    vol.Optional("s_used"): OPTIONAL_REAL,
    vol.Optional("s_star"): OPTIONAL_REAL,
    vol.Optional("s_star_sufficient"): vol.Any(None, bool),
}, extra=vol.ALLOW_EXTRA)

THRESHOLD_ROW_SCHEMA = vol.Schema({
    vol.Required("gamble"): str,
    vol.Required("gain"): REAL,
    vol.Required("loss"): REAL,
    vol.Required("laplace"): REAL,
    vol.Required("logistic"): REAL,
    vol.Optional("normal"): OPTIONAL_REAL,
}, extra=vol.ALLOW_EXTRA)

TABLE_SCHEMA = vol.Schema([THRESHOLD_ROW_SCHEMA])

VALUE_SCHEMA = vol.Schema({
    vol.Required("value"): OPTIONAL_REAL,
    vol.Optional("finite"): bool,
}, extra=vol.ALLOW_EXTRA)
