"""Domain types and errors for the PyBgRisk library."""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constant import (
    LOGGER_NAME,
    PROBABILITY_SUM_TOLERANCE,
    PROBABILITY_PRUNE_THRESHOLD,
    DOMINANCE_GRID_POINTS,
    DOMINANCE_LINEAR_POINTS,
    DOMINANCE_REFINEMENT_PASSES,
    DOMINANCE_REFINEMENT_FACTOR,
    DOMINANCE_REFINEMENT_THRESHOLD,
    MARGIN_TOLERANCE,
    CPT_DEFAULT_GAMMA,
    CPT_DEFAULT_DELTA,
    CPT_DEFAULT_LAMBDA,
    CPT_DEFAULT_RHO,
    ORACLE_DEFAULT_SAMPLES,
    ORACLE_DEFAULT_SEED,
    ORACLE_GRID_POINTS,
    ORACLE_MIN_SAMPLES,
    VERDICT_KEY,
    WORST_MARGIN_KEY,
    WITNESS_KEY,
    METHOD_KEY,
    Verdict,
    Method,
    OracleOutcome,
    DominanceOrder,
    MarginKind,
)

_LOGGER = logging.getLogger(LOGGER_NAME)


class PyBgRiskError(Exception):
    """Base class for every error raised by the library."""


class InputValidationError(PyBgRiskError, ValueError):
    """The inputs violate an operation's preconditions."""


class NumericalFailureError(PyBgRiskError, ArithmeticError):
    """A numerical procedure could not produce a certified answer."""


class InvalidGambleError(InputValidationError):
    """Exception thrown when outcomes do not form a valid gamble."""


class InvalidDistributionError(InputValidationError):
    """Exception thrown when background-risk parameters are not valid."""


class NonPositiveMeanError(InputValidationError):
    """Exception thrown when a gamble needs a positive mean and does not have one."""


class NoDownsideError(InputValidationError):
    """Exception thrown when a gamble is nonnegative almost surely."""


class NonPositiveScaleError(InputValidationError):
    """Exception thrown when a scale factor is not strictly positive."""


class NegativeHeadroomError(InputValidationError):
    """Exception thrown when mu - ell + max[X] is not positive."""


class InfiniteMeanError(InputValidationError):
    """Exception thrown when a background risk has no finite mean."""


class IdenticalDistributionsError(InputValidationError):
    """Exception thrown when two gambles have the same distribution."""


class EqualMaximaError(InputValidationError):
    """Exception thrown when two gambles share the same maximum."""


class MeanOrderViolatedError(InputValidationError):
    """Exception thrown when E[X] <= E[Y] for a pair that needs E[X] > E[Y]."""


class PreconditionViolatedError(InputValidationError):
    """Exception thrown when a demonstration's hypotheses do not hold."""


class NoAcceptanceFoundError(NumericalFailureError):
    """Exception thrown when no background risk below the ceiling makes a gamble acceptable."""


class NoRejectionFoundError(NumericalFailureError):
    """Exception thrown when no scaled gamble on the sweep is strictly rejected."""


class BracketNotFoundError(NumericalFailureError):
    """Exception thrown when a root or threshold cannot be bracketed."""


@dataclass(frozen=True)
class Gamble:
    """A finite discrete gamble in dollars.

    Outcomes are kept sorted by value with duplicate values merged."""

    values: tuple[float, ...]
    """Distinct outcome values, ascending"""

    probabilities: tuple[float, ...]
    """Probability of each value"""

    degenerate: bool = False
    """Explicitly allows a single-valued gamble"""

    pruned: bool = False
    """True when near-zero probabilities were dropped and the rest renormalized"""

    def __post_init__(self):
        if len(self.values) == 0:
            raise InvalidGambleError("a gamble needs at least one outcome")
        if len(self.values) != len(self.probabilities):
            raise InvalidGambleError("values and probabilities differ in length")
        if not all(math.isfinite(v) for v in self.values):
            raise InvalidGambleError("gamble values must be finite")
        if any(p <= 0.0 or p > 1.0 or not math.isfinite(p) for p in self.probabilities):
            raise InvalidGambleError("probabilities must lie in (0, 1]")
        total = math.fsum(self.probabilities)
        if abs(total - 1.0) > PROBABILITY_SUM_TOLERANCE:
            raise InvalidGambleError(f"probabilities sum to {total!r}, not 1")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InvalidGambleError("values must be strictly increasing")
        if len(self.values) < 2 and not self.degenerate:
            raise InvalidGambleError(
                "a gamble needs two distinct values unless flagged degenerate")

    @classmethod
    def from_outcomes(cls, outcomes, degenerate: bool = False) -> "Gamble":
        """Build a gamble from (value, probability) pairs."""
        pairs = [(float(x), float(p)) for x, p in outcomes]
        if not pairs:
            raise InvalidGambleError("a gamble needs at least one outcome")
        for x, p in pairs:
            if not math.isfinite(x) or not math.isfinite(p):
                raise InvalidGambleError("gamble values and probabilities must be finite")
            if p < 0.0:
                raise InvalidGambleError("probabilities must be nonnegative")

        kept = [(x, p) for x, p in pairs if p >= PROBABILITY_PRUNE_THRESHOLD]
        pruned = len(kept) != len(pairs)
        if not kept:
            raise InvalidGambleError("every probability is below the prune threshold")
        if pruned:
            total = math.fsum(p for _, p in kept)
            if abs(total - 1.0) > PROBABILITY_SUM_TOLERANCE:
                raise InvalidGambleError(f"probabilities sum to {total!r}, not 1")
            _LOGGER.warning("Dropped %d outcome(s) with probability below %s",
                            len(pairs) - len(kept), PROBABILITY_PRUNE_THRESHOLD)
            kept = [(x, p / total) for x, p in kept]

        merged: dict[float, list[float]] = {}
        for x, p in kept:
            merged.setdefault(x, []).append(p)
        values = tuple(sorted(merged))
        probabilities = tuple(math.fsum(merged[v]) for v in values)
        return cls(values=values, probabilities=probabilities,
                   degenerate=degenerate, pruned=pruned)

    @classmethod
    def fifty_fifty(cls, gain: float, loss: float) -> "Gamble":
        """Gain `gain` or lose `loss` dollars with equal probability."""
        return cls.from_outcomes([(gain, 0.5), (-loss, 0.5)])

    @classmethod
    def constant(cls, value: float) -> "Gamble":
        """A sure payoff."""
        return cls.from_outcomes([(value, 1.0)], degenerate=True)

    @property
    def x(self) -> np.ndarray:
        """Outcome values as an array."""
        return np.asarray(self.values, dtype=float)

    @property
    def p(self) -> np.ndarray:
        """Probabilities as an array."""
        return np.asarray(self.probabilities, dtype=float)

    @property
    def outcomes(self) -> list[tuple[float, float]]:
        """(value, probability) pairs."""
        return list(zip(self.values, self.probabilities))

    @property
    def support_bound(self) -> float:
        """M = max |value|."""
        return max(abs(v) for v in self.values)

    @property
    def max_value(self) -> float:
        """max[X]"""
        return self.values[-1]

    @property
    def min_value(self) -> float:
        """min[X]"""
        return self.values[0]

    def shifted(self, c: float) -> "Gamble":
        """The gamble X + c."""
        return Gamble.from_outcomes([(v + c, p) for v, p in self.outcomes],
                                    degenerate=self.degenerate)

    def cdf(self, a) -> np.ndarray:
        """Step CDF P(X <= a)."""
        cumulative = np.concatenate(([0.0], np.cumsum(self.p)))
        index = np.searchsorted(self.x, np.asarray(a, dtype=float), side="right")
        return np.minimum(cumulative[index], 1.0)

    def to_dict(self) -> dict:
        """JSON form {"outcomes": [{"x": .., "p": ..}, ...]}."""
        data = {"outcomes": [{"x": v, "p": p} for v, p in self.outcomes]}
        if self.degenerate:
            data["degenerate"] = True
        return data


@dataclass(frozen=True)
class RiskinessResult:
    """R(X) plus solver diagnostics."""

    riskiness: float
    alpha: float
    residual: float
    iterations: int

    def to_dict(self) -> dict:
        return {
            "riskiness": self.riskiness,
            "alpha": self.alpha,
            "residual": self.residual,
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class SizeReport:
    """The three size indices of a background risk and where their suprema sit."""

    s_left: float
    s_two_sided: float
    s_second_order: float
    argsup_left: Optional[float] = None
    argsup_two_sided: Optional[float] = None
    argsup_second_order: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "s_left": self.s_left,
            "s_two_sided": self.s_two_sided,
            "s_second_order": self.s_second_order,
            "argsup_left": self.argsup_left,
            "argsup_two_sided": self.argsup_two_sided,
            "argsup_second_order": self.argsup_second_order,
        }


@dataclass(frozen=True)
class GridConfig:
    """Grid used to verify dominance inequalities."""

    points: int = DOMINANCE_GRID_POINTS
    linear_points: int = DOMINANCE_LINEAR_POINTS
    refinement_passes: int = DOMINANCE_REFINEMENT_PASSES
    refinement_factor: int = DOMINANCE_REFINEMENT_FACTOR
    refinement_threshold: float = DOMINANCE_REFINEMENT_THRESHOLD
    tolerance: float = MARGIN_TOLERANCE

    def __post_init__(self):
        if self.points < 3 or self.linear_points < 2:
            raise InputValidationError("grid needs at least 3 quantile and 2 linear points")
        if self.refinement_passes < 0 or self.refinement_factor < 1:
            raise InputValidationError("refinement passes and factor must be nonnegative")


@dataclass(frozen=True)
class GridMeta:
    """Metadata describing the grid behind a verdict."""

    points: int
    refinement_passes: int
    lower: float
    upper: float

    def to_dict(self) -> dict:
        return {
            "points": self.points,
            "refinement_passes": self.refinement_passes,
            "lower": self.lower,
            "upper": self.upper,
        }


@dataclass(frozen=True)
class DominanceReport:
    """Verdict on whether W + X dominates W (or W + Y)."""

    verdict: Verdict
    worst_margin: float
    witness_a: Optional[float]
    method: Method
    grid_meta: Optional[GridMeta] = None
    order: DominanceOrder = DominanceOrder.FIRST
    sufficient_condition: Optional[bool] = None
    tail_coefficient: Optional[float] = None
    margin_kind: MarginKind = MarginKind.ABSOLUTE

    @property
    def is_dominant(self) -> bool:
        """True for Dominant and SufficientConditionMet."""
        return self.verdict in (Verdict.DOMINANT, Verdict.SUFFICIENT_CONDITION_MET)

    def to_dict(self) -> dict:
        data = {
            VERDICT_KEY: str(self.verdict),
            WORST_MARGIN_KEY: self.worst_margin,
            WITNESS_KEY: self.witness_a,
            METHOD_KEY: str(self.method),
            "order": str(self.order),
            "sufficient_condition": self.sufficient_condition,
            "tail_coefficient": self.tail_coefficient,
            "margin_kind": str(self.margin_kind),
        }
        if self.grid_meta is not None:
            data["grid_meta"] = self.grid_meta.to_dict()
        return data


@dataclass(frozen=True)
class ThresholdRow:
    """One row of the sufficient-sigma table."""

    label: str
    gain: float
    loss: float
    sigma_laplace: float
    sigma_logistic: float
    sigma_normal: Optional[float] = None
    normal_mu: Optional[float] = None
    ell: Optional[float] = None

    def __post_init__(self):
        sigmas = [self.sigma_laplace, self.sigma_logistic]
        if self.sigma_normal is not None:
            if self.normal_mu is None or self.ell is None:
                raise InputValidationError("sigma_normal needs normal_mu and ell")
            sigmas.append(self.sigma_normal)
        if any(not s > 0.0 for s in sigmas):
            raise InputValidationError("threshold sigmas must be positive")


@dataclass(frozen=True)
class CptParams:
    """Cumulative prospect theory parameters.

    Weighting w(p) = p^c / (p^c + (1-p)^c)^(1/c) with c = gamma for gains and delta for
    losses; value v(x) = x^rho for gains and -loss_aversion * (-x)^rho for losses."""

    gamma: float = CPT_DEFAULT_GAMMA
    delta: float = CPT_DEFAULT_DELTA
    loss_aversion: float = CPT_DEFAULT_LAMBDA
    rho: float = CPT_DEFAULT_RHO

    def __post_init__(self):
        for name in ("gamma", "delta", "loss_aversion", "rho"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InputValidationError(f"CPT parameter {name} must be positive")


@dataclass(frozen=True, eq=False)
class DiscretizedLottery:
    """A finite lottery with sorted support, used for rank-dependent evaluation."""

    support: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float)
        probabilities = np.asarray(self.probabilities, dtype=float)
        if support.ndim != 1 or support.shape != probabilities.shape or support.size == 0:
            raise InputValidationError("support and probabilities must be matching 1-d arrays")
        if np.any(np.diff(support) < 0.0):
            raise InputValidationError("lottery support must be sorted ascending")
        if np.any(probabilities < 0.0):
            raise InputValidationError("lottery probabilities must be nonnegative")
        total = math.fsum(probabilities.tolist())
        if abs(total - 1.0) > PROBABILITY_SUM_TOLERANCE:
            raise InputValidationError(f"lottery probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probabilities)

    @classmethod
    def point(cls, value: float = 0.0) -> "DiscretizedLottery":
        """A sure amount."""
        return cls(np.array([value]), np.array([1.0]))

    @classmethod
    def from_gamble(cls, gamble: Gamble) -> "DiscretizedLottery":
        return cls(gamble.x, gamble.p)

    def __len__(self) -> int:
        return int(self.support.size)


@dataclass(frozen=True)
class PairReport:
    """Verdict on choosing X over Y."""

    verdict: bool
    worst_margin: float
    witness_a: Optional[float]
    s_used: Optional[float] = None
    s_star: Optional[float] = None
    s_star_sufficient: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            VERDICT_KEY: self.verdict,
            WORST_MARGIN_KEY: self.worst_margin,
            WITNESS_KEY: self.witness_a,
            "s_used": self.s_used,
            "s_star": self.s_star,
            "s_star_sufficient": self.s_star_sufficient,
        }


@dataclass(frozen=True)
class OracleConfig:
    """Monte Carlo oracle settings."""

    samples: int = ORACLE_DEFAULT_SAMPLES
    seed: int = ORACLE_DEFAULT_SEED
    grid_points: int = ORACLE_GRID_POINTS

    def __post_init__(self):
        if self.samples < ORACLE_MIN_SAMPLES:
            raise InputValidationError(f"oracle needs at least {ORACLE_MIN_SAMPLES} samples")
        if not 0 <= self.seed < 2**64:
            raise InputValidationError("seed must be a 64-bit unsigned integer")
        if self.grid_points < 1:
            raise InputValidationError("oracle needs at least one grid point")


@dataclass(frozen=True)
class OracleReport:
    """Monte Carlo oracle outcome."""

    outcome: OracleOutcome
    worst_gap: float
    witness_a: Optional[float]
    standard_error: float
    samples: int
    seed: int
    grid: list[float] = field(default_factory=list, repr=False)

    @property
    def violation_found(self) -> bool:
        return self.outcome == OracleOutcome.VIOLATION_FOUND

    def to_dict(self) -> dict:
        """Same shape as a dominance report; the margin is minus the largest gap."""
        return {
            VERDICT_KEY: str(self.outcome),
            WORST_MARGIN_KEY: -self.worst_gap,
            WITNESS_KEY: self.witness_a,
            METHOD_KEY: str(Method.MONTE_CARLO),
            "standard_error": self.standard_error,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class CptThresholdRow:
    """One row of the prospect-theory sigma table."""

    label: str
    gain: float
    loss: float
    sigma_laplace: float
    sigma_logistic: float
    sigma_normal: float
    points: int

    def __post_init__(self):
        if any(s < 0.0 for s in (self.sigma_laplace, self.sigma_logistic, self.sigma_normal)):
            raise InputValidationError("threshold sigmas must be nonnegative")
