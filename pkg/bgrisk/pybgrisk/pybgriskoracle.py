"""Independent oracles: Monte Carlo, exact discrete convolution and the rejection sweep."""

import logging
import math
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .constant import (
    LOGGER_NAME,
    MARGIN_TOLERANCE,
    MIN_MASS_ABOVE_LIABILITY,
    ORACLE_BLOCK_SIZE,
    ORACLE_SIGMA_THRESHOLD,
    QUAD_EPSABS,
    QUAD_EPSREL,
    QUAD_LIMIT,
    REJECTION_SWEEP_STEPS,
    OracleOutcome,
)
from .models import (
    DiscretizedLottery,
    Gamble,
    InputValidationError,
    NoRejectionFoundError,
    OracleConfig,
    OracleReport,
    PreconditionViolatedError,
)
from .pybgriskbackgroundbase import PyBgRiskBackgroundBase, _check_distribution
from .pybgriskcpt import convolve
from .pybgriskgamble import mean

_LOGGER = logging.getLogger(LOGGER_NAME)

_UNIT_OPEN = np.finfo(float).tiny
# Quadrature breakpoints in the bulk of W, also shifted by each outcome.
_REJECTION_LANDMARKS = np.array([1e-9, 0.01, 0.5, 0.99, 1.0 - 1e-9])


# Monte Carlo -----------------------------------------------------------------

def _block_generator(seed: int, block: int) -> np.random.Generator:
    """Philox substream for one block; independent of how blocks are grouped."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def sample_paired(x: Gamble, w: PyBgRiskBackgroundBase, config: OracleConfig) -> list[np.ndarray]:
    """Draws of W, split by the outcome of X drawn alongside them.

    Returns one sorted array of W values per outcome of X."""
    cumulative = np.cumsum(x.p)
    groups = [[] for _ in range(len(x.x))]
    blocks = -(-config.samples // ORACLE_BLOCK_SIZE)
    for block in range(blocks):
        size = min(ORACLE_BLOCK_SIZE, config.samples - block * ORACLE_BLOCK_SIZE)
        generator = _block_generator(config.seed, block)
        levels = np.clip(generator.random(size), _UNIT_OPEN, 1.0 - np.finfo(float).eps)
        picks = np.minimum(np.searchsorted(cumulative, generator.random(size), side="right"),
                           len(x.x) - 1)
        draws = np.asarray(w.quantile(levels), dtype=float)
        for index in range(len(x.x)):
            groups[index].append(draws[picks == index])
    _LOGGER.debug("sample_paired: %d samples in %d blocks (seed %d)",
                  config.samples, blocks, config.seed)
    return [np.sort(np.concatenate(parts)) for parts in groups]


def oracle_grid(w: PyBgRiskBackgroundBase, points: int) -> np.ndarray:
    """Evaluation points at the mid-quantiles of W."""
    levels = (np.arange(points) + 0.5) / points
    return np.asarray(w.quantile(levels), dtype=float)


def _count_between(sorted_draws: np.ndarray, low: np.ndarray, high: np.ndarray) -> np.ndarray:
    """Number of draws in (low, high]."""
    return (np.searchsorted(sorted_draws, high, side="right")
            - np.searchsorted(sorted_draws, low, side="right"))


def _report(gap: np.ndarray, error: np.ndarray, grid: np.ndarray,
            config: OracleConfig) -> OracleReport:
    with np.errstate(divide="ignore", invalid="ignore"):
        score = np.where(error > 0.0, gap / error, np.where(gap > 0.0, np.inf, 0.0))
    index = int(np.argmax(score))
    violation = bool(gap[index] > 0.0 and score[index] > ORACLE_SIGMA_THRESHOLD)
    if not violation:
        index = int(np.argmax(gap))
    outcome = (OracleOutcome.VIOLATION_FOUND if violation
               else OracleOutcome.CONSISTENT_WITH_DOMINANCE)
    _LOGGER.info("oracle: %s (gap %s, standard error %s at a=%s)",
                 outcome, gap[index], error[index], grid[index])
    return OracleReport(
        outcome=outcome,
        worst_gap=float(gap[index]),
        witness_a=float(grid[index]),
        standard_error=float(error[index]),
        samples=config.samples,
        seed=config.seed,
        grid=grid.tolist(),
    )


def mc_fosd_oracle(x: Gamble, w: PyBgRiskBackgroundBase,
                   config: Optional[OracleConfig] = None) -> OracleReport:
    """Paired Monte Carlo check of P(W + X <= a) <= P(W <= a).

    Refutes dominance when the mean of 1{W + X <= a} - 1{W <= a} exceeds its standard
    error by more than ORACLE_SIGMA_THRESHOLD at some grid point; can never certify it."""
    config = config or OracleConfig()
    _check_distribution(w)
    groups = sample_paired(x, w, config)
    grid = oracle_grid(w, config.grid_points)
    up = np.zeros(grid.size)
    down = np.zeros(grid.size)
    for value, draws in zip(x.x, groups):
        shifted = grid - value
        if value < 0.0:
            up += _count_between(draws, grid, shifted)
        elif value > 0.0:
            down += _count_between(draws, shifted, grid)
    n = float(config.samples)
    gap = (up - down) / n
    variance = np.maximum((up + down) / n - gap ** 2, 0.0)
    return _report(gap, np.sqrt(variance / n), grid, config)


def mc_sosd_oracle(x: Gamble, w: PyBgRiskBackgroundBase,
                   config: Optional[OracleConfig] = None) -> OracleReport:
    """Paired Monte Carlo check of E[(a - W - X)+] <= E[(a - W)+]."""
    config = config or OracleConfig()
    _check_distribution(w)
    groups = sample_paired(x, w, config)
    grid = oracle_grid(w, config.grid_points)
    center = float(w.quantile(0.5))
    first = np.zeros(grid.size)
    second = np.zeros(grid.size)
    for value, draws in zip(x.x, groups):
        v = draws - center
        count = np.concatenate(([0.0], np.arange(1, v.size + 1, dtype=float)))
        sums = np.concatenate(([0.0], np.cumsum(v)))
        squares = np.concatenate(([0.0], np.cumsum(v * v)))
        a = grid - center
        low, high = np.minimum(a, a - value), np.maximum(a, a - value)
        below = np.searchsorted(v, low, side="right")
        middle = np.searchsorted(v, high, side="right")
        # d = -value below both kinks
        first += -value * count[below]
        second += value * value * count[below]
        # between the kinks d = +-(high - V)
        sign = 1.0 if value < 0.0 else -1.0
        n_mid = count[middle] - count[below]
        s1 = sums[middle] - sums[below]
        s2 = squares[middle] - squares[below]
        first += sign * (high * n_mid - s1)
        second += high * high * n_mid - 2.0 * high * s1 + s2
    n = float(config.samples)
    gap = first / n
    variance = np.maximum(second / n - gap ** 2, 0.0)
    return _report(gap, np.sqrt(variance / n), grid, config)


# Exact discrete convolution ----------------------------------------------------

def _step_cdf(lottery: DiscretizedLottery, points: np.ndarray) -> np.ndarray:
    cumulative = np.cumsum(lottery.probabilities)
    index = np.searchsorted(lottery.support, points, side="right")
    return np.where(index > 0, cumulative[np.maximum(index - 1, 0)], 0.0)


def discretization_tolerance(lottery: DiscretizedLottery) -> float:
    """CDF resolution of a discretised background: twice its largest cell mass."""
    return 2.0 * float(np.max(lottery.probabilities))


def brute_force_fosd(x: Gamble, w_discrete: DiscretizedLottery,
                     tolerance: float = MARGIN_TOLERANCE) -> bool:
    """Exact check of P(W + X <= a) <= P(W <= a) + tolerance at every support point."""
    combined = convolve(w_discrete, x)
    points = np.union1d(w_discrete.support, combined.support)
    gap = _step_cdf(combined, points) - _step_cdf(w_discrete, points)
    index = int(np.argmax(gap))
    _LOGGER.debug("brute_force_fosd: %d points, largest gap %s at a=%s",
                  points.size, gap[index], points[index])
    return bool(gap[index] <= tolerance)


# Limited-liability rejection ---------------------------------------------------

def _check_rejection_inputs(x: Gamble, w: PyBgRiskBackgroundBase, ell: float, u_scale: float):
    _check_distribution(w)
    if not math.isfinite(ell):
        raise InputValidationError(f"ell must be finite, got {ell!r}")
    if not (math.isfinite(u_scale) and u_scale > 0.0):
        raise InputValidationError(f"u_scale must be positive, got {u_scale!r}")
    if mean(x) >= 0.0:
        raise PreconditionViolatedError("the gamble must have strictly negative mean")
    if float(w.sf(ell)) < MIN_MASS_ABOVE_LIABILITY:
        raise PreconditionViolatedError("background risk lies below ell with certainty")


def truncated_eu_difference(x: Gamble, w: PyBgRiskBackgroundBase, ell: float,
                            u_scale: float, t: float) -> float:
    """E[u(max(W + tX, ell))] - E[u(max(W, ell))] for u(a) = 1 - exp(-a / u_scale).

    Each outcome contributes u(ell) (G(ell - tx) - G(ell)) plus the integral over b >= ell of
    u(b) (g(b - tx) - g(b)), integrated piecewise between kinks."""

    def utility(a):
        return -math.expm1(-a / u_scale)

    landmarks = np.concatenate((w.kink_points(),
                                np.asarray(w.quantile(_REJECTION_LANDMARKS), dtype=float)))
    total = []
    for value, probability in zip(x.x, x.p):
        step = t * value
        boundary = utility(ell) * (float(w.cdf(ell - step)) - float(w.cdf(ell)))
        kinks = np.concatenate((landmarks, landmarks + step))
        cuts = [ell] + sorted(float(k) for k in np.unique(kinks) if k > ell) + [math.inf]
        inner = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            piece, error, _, *message = quad(
                lambda b: utility(b) * (float(w.pdf(b - step)) - float(w.pdf(b))),
                lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, full_output=1)
            if message:
                _LOGGER.debug("truncated EU on [%s, %s]: %s (error %s)", lo, hi,
                              message[0].splitlines()[0], error)
            inner += piece
        total.append(probability * (boundary + inner))
    return math.fsum(total)


def rejection_sweep(x: Gamble, w: PyBgRiskBackgroundBase, ell: float,
                    u_scale: float) -> list[tuple[float, float]]:
    """(t, truncated EU difference) for t = 1, 1/2, ..., 2**-(REJECTION_SWEEP_STEPS - 1)."""
    _check_rejection_inputs(x, w, ell, u_scale)
    return [(2.0 ** -k, truncated_eu_difference(x, w, ell, u_scale, 2.0 ** -k))
            for k in range(REJECTION_SWEEP_STEPS)]


def small_negative_gamble_rejection(x: Gamble, w: PyBgRiskBackgroundBase, ell: float,
                                    u_scale: float) -> float:
    """Largest grid t such that tX, and every smaller grid multiple, is strictly rejected."""
    sweep = rejection_sweep(x, w, ell, u_scale)
    t_bar = None
    for t, difference in reversed(sweep):
        if difference >= 0.0:
            break
        t_bar = t
    if t_bar is None:
        _LOGGER.error("small_negative_gamble_rejection: not rejected even at t=%s", sweep[-1][0])
        raise NoRejectionFoundError("no grid multiple of the gamble is rejected")
    _LOGGER.info("small_negative_gamble_rejection: t_bar=%s", t_bar)
    return t_bar
