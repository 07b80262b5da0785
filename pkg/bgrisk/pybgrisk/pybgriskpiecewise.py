"""Piecewise log-linear / log-quadratic background risk."""

import logging
import math

import numpy as np
from scipy.integrate import quad
from scipy.special import dawsn, erfcx

from .constant import (
    LOGGER_NAME,
    CDF_ROUND_TRIP_TOLERANCE,
    QUAD_LIMIT,
    SIZE_COMPARISON_TOLERANCE,
    BackgroundFamily,
)
from .helpers import Helpers
from .models import InvalidDistributionError
from .pybgriskbackgroundbase import PyBgRiskBackgroundBase

_LOGGER = logging.getLogger(LOGGER_NAME)

_QUANTILE_BISECTION_STEPS = 200


class PyBgRiskPiecewise(PyBgRiskBackgroundBase):
    """Density with ln g piecewise quadratic between knots k_1 < ... < k_n.

    On segment j, ln g(a) = L_j + slope_j (a - anchor_j) + curvature_j (a - anchor_j)^2 - ln Z.
    The anchor is k_1 for the left tail and the left knot otherwise; the L_j make ln g
    continuous and Z normalizes. Every segment integral has a closed form."""

    family = BackgroundFamily.PIECEWISE

    def __init__(self, knots, log_coeffs):
        knots = np.asarray(knots, dtype=float)
        coeffs = np.asarray(log_coeffs, dtype=float)
        if knots.ndim != 1 or knots.size < 1:
            raise InvalidDistributionError("piecewise density needs at least one knot")
        if coeffs.shape != (knots.size + 1, 2):
            raise InvalidDistributionError(
                f"log_coeffs must hold {knots.size + 1} [slope, curvature] pairs")
        if not (np.all(np.isfinite(knots)) and np.all(np.isfinite(coeffs))):
            raise InvalidDistributionError("knots and coefficients must be finite")
        if np.any(np.diff(knots) <= 0.0):
            raise InvalidDistributionError("knots must be strictly increasing")
        slope, curve = coeffs[:, 0], coeffs[:, 1]
        if not (curve[0] < 0.0 or (curve[0] == 0.0 and slope[0] > 0.0)):
            raise InvalidDistributionError("left tail is not integrable")
        if not (curve[-1] < 0.0 or (curve[-1] == 0.0 and slope[-1] < 0.0)):
            raise InvalidDistributionError("right tail is not integrable")

        self._knots = knots
        self._slope = slope
        self._curve = curve
        n = knots.size
        self._lo = np.concatenate(([-np.inf], knots))
        self._hi = np.concatenate((knots, [np.inf]))
        self._anchor = np.concatenate(([knots[0]], knots))

        level = np.zeros(n + 1)
        for j in range(1, n):
            width = knots[j] - knots[j - 1]
            level[j + 1] = level[j] + slope[j] * width + curve[j] * width * width
        level -= self._peak_log(level)
        self._level = level

        segments = np.arange(n + 1)
        self._mass = self._integral(segments, self._lo, self._hi)
        self._total = float(math.fsum(self._mass.tolist()))
        self._log_total = math.log(self._total)
        self._mass_before = np.concatenate(([0.0], np.cumsum(self._mass)[:-1]))
        self._mass_after = np.concatenate((np.cumsum(self._mass[::-1])[::-1][1:], [0.0]))
        self._moment = self._first_moment(segments, self._lo, self._hi)
        self._moment_before = np.concatenate(([0.0], np.cumsum(self._moment)[:-1]))
        self._mean = float(math.fsum(self._moment.tolist())) / self._total
        self._stdev = None
        _LOGGER.debug("PyBgRiskPiecewise: %d segments, mean %s", n + 1, self._mean)

    def _peak_log(self, level: np.ndarray) -> float:
        """Largest ln g~ over knots and in-segment vertices, before normalization."""
        candidates = list(level[1:])
        for j in range(1, self._knots.size):
            if self._curve[j] < 0.0:
                vertex = -self._slope[j] / (2.0 * self._curve[j])
                if 0.0 < vertex < self._knots[j] - self._knots[j - 1]:
                    candidates.append(level[j] - self._slope[j] ** 2 / (4.0 * self._curve[j]))
        for j in (0, self._knots.size):
            if self._curve[j] < 0.0:
                vertex = -self._slope[j] / (2.0 * self._curve[j])
                if (j == 0 and vertex < 0.0) or (j > 0 and vertex > 0.0):
                    candidates.append(level[j] - self._slope[j] ** 2 / (4.0 * self._curve[j]))
        return max(candidates)

    # Segment algebra ---------------------------------------------------------

    def _segment(self, a, side: str = "right"):
        return np.searchsorted(self._knots, a, side=side)

    def _log_tilde(self, j, a):
        """Unnormalized ln g on segment j; -inf at infinite points."""
        a = np.asarray(a, dtype=float)
        finite = np.isfinite(a)
        t = np.where(finite, a - self._anchor[j], 0.0)
        value = self._level[j] + self._slope[j] * t + self._curve[j] * t * t
        return np.where(finite, value, -np.inf)

    def _integral(self, j, t1, t2):
        """Integral of g~ over [t1, t2] inside segment j."""
        j = np.asarray(j)
        t1 = np.asarray(t1, dtype=float)
        t2 = np.asarray(t2, dtype=float)
        b, c, anchor = self._slope[j], self._curve[j], self._anchor[j]
        g1 = np.exp(self._log_tilde(j, t1))
        g2 = np.exp(self._log_tilde(j, t2))
        with np.errstate(all="ignore"):
            # Log-linear pieces.
            width = np.where(np.isfinite(t2 - t1), t2 - t1, 0.0)
            flat = g1 * width
            left_tail = g2 / b
            grow = g1 * np.expm1(b * (t2 - t1)) / b
            linear = np.where(b == 0.0, flat, np.where(np.isinf(t1), left_tail, grow))

            # Log-quadratic pieces, curvature > 0 (bounded segments only).
            root = np.sqrt(np.abs(c))
            shift = b / (2.0 * np.where(c == 0.0, 1.0, c))
            u1 = root * (t1 - anchor + shift)
            u2 = root * (t2 - anchor + shift)
            convex = (g2 * dawsn(u2) - g1 * dawsn(u1)) / root

            # Log-quadratic pieces, curvature < 0.
            half = math.sqrt(math.pi) / (2.0 * np.where(root == 0.0, 1.0, root))
            e1 = np.where(g1 > 0.0, g1 * erfcx(np.abs(u1)), 0.0)
            e2 = np.where(g2 > 0.0, g2 * erfcx(np.abs(u2)), 0.0)
            vertex_log = self._level[j] - b * shift / 2.0
            straddle = (u1 < 0.0) & (u2 > 0.0)
            peak = np.exp(np.where(straddle, vertex_log, -np.inf))
            concave = half * np.where(
                u1 >= 0.0, e1 - e2,
                np.where(u2 <= 0.0, e2 - e1, 2.0 * peak - e1 - e2))

            value = np.where(c == 0.0, linear, np.where(c > 0.0, convex, concave))
        return np.maximum(value, 0.0)

    def _first_moment(self, j, t1, t2):
        """Integral of a g~(a) over [t1, t2] inside segment j."""
        j = np.asarray(j)
        t1 = np.asarray(t1, dtype=float)
        t2 = np.asarray(t2, dtype=float)
        b, c, anchor = self._slope[j], self._curve[j], self._anchor[j]
        g1 = np.exp(self._log_tilde(j, t1))
        g2 = np.exp(self._log_tilde(j, t2))
        mass = self._integral(j, t1, t2)
        with np.errstate(all="ignore"):
            x1 = np.where(g1 > 0.0, g1 * (t1 / b - 1.0 / (b * b)), 0.0)
            x2 = np.where(g2 > 0.0, g2 * (t2 / b - 1.0 / (b * b)), 0.0)
            linear = np.where(b == 0.0, g1 * 0.5 * (t2 * t2 - t1 * t1), x2 - x1)
            safe_c = np.where(c == 0.0, 1.0, c)
            vertex = anchor - b / (2.0 * safe_c)
            quadratic = (g2 - g1) / (2.0 * safe_c) + vertex * mass
            value = np.where(c == 0.0, linear, quadratic)
        return value

    # Density accessors -------------------------------------------------------

    def logpdf(self, a):
        return self._log_tilde(self._segment(a), a) - self._log_total

    def cdf(self, a):
        a = np.asarray(a, dtype=float)
        j = self._segment(a)
        partial = self._integral(j, self._lo[j], a)
        return np.clip((self._mass_before[j] + partial) / self._total, 0.0, 1.0)

    def sf(self, a):
        a = np.asarray(a, dtype=float)
        j = self._segment(a)
        partial = self._integral(j, a, self._hi[j])
        return np.clip((self._mass_after[j] + partial) / self._total, 0.0, 1.0)

    def _log_tail_integral(self, j: int, a, toward_left: bool):
        """ln of the tail mass beyond a inside an unbounded segment, without underflow."""
        b, c = self._slope[j], self._curve[j]
        log_g = self._log_tilde(j, a)
        if c == 0.0:
            return log_g - math.log(abs(b))
        root = math.sqrt(-c)
        u = root * (np.asarray(a, dtype=float) - self._anchor[j] + b / (2.0 * c))
        outward = -u if toward_left else u
        with np.errstate(divide="ignore"):
            direct = np.log(self._integral(j, self._lo[j], a) if toward_left
                            else self._integral(j, a, self._hi[j]))
        tail = math.log(math.sqrt(math.pi) / (2.0 * root)) + log_g + np.log(erfcx(np.maximum(outward, 0.0)))
        return np.where(outward >= 0.0, tail, direct)

    def logcdf(self, a):
        a = np.asarray(a, dtype=float)
        with np.errstate(divide="ignore"):
            bulk = np.log(self.cdf(a))
        left = self._log_tail_integral(0, np.minimum(a, self._knots[0]), True) - self._log_total
        return np.where(a < self._knots[0], left, bulk)

    def logsf(self, a):
        a = np.asarray(a, dtype=float)
        n = self._knots.size
        with np.errstate(divide="ignore"):
            bulk = np.log(self.sf(a))
        right = self._log_tail_integral(n, np.maximum(a, self._knots[-1]), False) - self._log_total
        return np.where(a > self._knots[-1], right, bulk)

    def quantile(self, q):
        """Vectorized bisection on the CDF."""
        q = np.asarray(q, dtype=float)
        flat = np.atleast_1d(q).ravel()
        spread = max(self._knots[-1] - self._knots[0], self.stdev, 1.0)
        lower, upper = self._knots[0] - spread, self._knots[-1] + spread
        target_lo, target_hi = float(np.min(flat)), float(np.max(flat))
        while self.cdf(lower) > target_lo and math.isfinite(lower):
            lower -= 2.0 * (self._knots[0] - lower)
        while self.cdf(upper) < target_hi and math.isfinite(upper):
            upper += 2.0 * (upper - self._knots[-1])
        lo = np.full(flat.shape, lower)
        hi = np.full(flat.shape, upper)
        for _ in range(_QUANTILE_BISECTION_STEPS):
            middle = 0.5 * (lo + hi)
            below = self.cdf(middle) < flat
            lo = np.where(below, middle, lo)
            hi = np.where(below, hi, middle)
            if np.all(hi - lo <= 4.0 * np.spacing(np.maximum(np.abs(lo), np.abs(hi)))):
                break
        result = 0.5 * (lo + hi)
        drift = float(np.max(np.abs(self.cdf(result) - flat)))
        if drift > CDF_ROUND_TRIP_TOLERANCE:
            _LOGGER.warning("piecewise quantile: CDF round trip is off by %s", drift)
        return result.reshape(q.shape) if q.ndim else float(result[0])

    def integrated_cdf(self, a):
        """u_G(a) = a G(a) - E[W; W <= a]."""
        a = np.asarray(a, dtype=float)
        j = self._segment(a)
        partial = self._first_moment(j, self._lo[j], a)
        moment = (self._moment_before[j] + partial) / self._total
        value = a * self.cdf(a) - moment
        if self._curve[0] == 0.0:
            tail = self.cdf(a) / self._slope[0]
            value = np.where(a < self._knots[0], tail, value)
        return np.maximum(value, 0.0)

    def log_integrated_cdf(self, a):
        a = np.asarray(a, dtype=float)
        with np.errstate(divide="ignore"):
            bulk = np.log(self.integrated_cdf(a))
        if self._curve[0] == 0.0:
            tail = self.logcdf(a) - math.log(self._slope[0])
            return np.where(a < self._knots[0], tail, bulk)
        return bulk

    def log_density_derivative(self, a, side: str = "right"):
        a = np.asarray(a, dtype=float)
        j = self._segment(a, side="left" if side == "left" else "right")
        return self._slope[j] + 2.0 * self._curve[j] * (a - self._anchor[j])

    @property
    def mean(self) -> float:
        return self._mean

    @property
    def stdev(self) -> float:
        if self._stdev is None:
            def weighted(t):
                return (t - self._mean) ** 2 * float(self.pdf(t))
            variance = 0.0
            for lo, hi in zip(self._lo, self._hi):
                value, _ = quad(weighted, lo, hi, limit=QUAD_LIMIT)
                variance += value
            self._stdev = math.sqrt(variance)
        return self._stdev

    def kink_points(self) -> np.ndarray:
        return self._knots.copy()

    def left_tail_rate(self) -> float:
        return math.inf if self._curve[0] < 0.0 else float(self._slope[0])

    def right_tail_rate(self) -> float:
        return math.inf if self._curve[-1] < 0.0 else float(-self._slope[-1])

    # Size indices ------------------------------------------------------------

    def log_derivative_sup(self, floor=None):
        """Segment-wise: g'/g is affine on each segment, so its sup sits at an end."""
        best, best_at = -math.inf, None
        for j in range(self._knots.size + 1):
            lo, hi = self._lo[j], self._hi[j]
            if floor is not None:
                if hi < floor:
                    continue
                lo = max(lo, floor)
            b, c, anchor = self._slope[j], self._curve[j], self._anchor[j]
            for end in (lo, hi):
                if math.isinf(end):
                    if c < 0.0 and end < 0.0:
                        value = math.inf
                    elif c == 0.0:
                        value = b
                    else:
                        continue
                else:
                    value = b + 2.0 * c * (end - anchor)
                if value > best:
                    best, best_at = value, float(end)
        _LOGGER.debug("PyBgRiskPiecewise:log_derivative_sup: %s at %s (floor %s)",
                      best, best_at, floor)
        return best, best_at

    def is_exactly_s_dominant(self, s: float) -> bool:
        closed_form = super().is_exactly_s_dominant(s)
        grid = Helpers.merge_points(self.quantile_grid(), self._knots)
        tilted = self.logpdf(grid) - grid / s
        tolerance = SIZE_COMPARISON_TOLERANCE * np.maximum(1.0, np.abs(tilted[1:]))
        on_grid = bool(np.all(np.diff(tilted) <= tolerance))
        if on_grid != closed_form:
            _LOGGER.warning("PyBgRiskPiecewise: grid monotonicity (%s) disagrees with the "
                            "closed form (%s) at s=%s", on_grid, closed_form, s)
        return closed_form and on_grid

    # Constructors ------------------------------------------------------------

    def _coeff_pairs(self) -> np.ndarray:
        return np.column_stack((self._slope, self._curve))

    def scaled(self, t: float):
        self._check_scale_factor(t)
        return PyBgRiskPiecewise(t * self._knots,
                                 np.column_stack((self._slope / t, self._curve / (t * t))))

    def shifted(self, c: float):
        return PyBgRiskPiecewise(self._knots + c, self._coeff_pairs())

    def reflected(self):
        n = self._knots.size
        pairs = [(-self._slope[n], self._curve[n])]
        for j in range(n - 1, 0, -1):
            width = self._knots[j] - self._knots[j - 1]
            pairs.append((-self._slope[j] - 2.0 * self._curve[j] * width, self._curve[j]))
        pairs.append((-self._slope[0], self._curve[0]))
        return PyBgRiskPiecewise(-self._knots[::-1], pairs)

    def to_dict(self) -> dict:
        return {
            "family": str(self.family),
            "knots": self._knots.tolist(),
            "log_coeffs": self._coeff_pairs().tolist(),
        }
