"""Constants for the PyBgRisk library."""
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        """Backport of enum.StrEnum for Python 3.10."""

        def __str__(self):
            return str.__str__(self)

        def __format__(self, format_spec):
            return str.__format__(str(self), format_spec)

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):
            return name.lower()

LOGGER_NAME = "pybgrisk"

# Keys read from JSON inputs.
OUTCOMES_KEY = "outcomes"
VALUE_KEY = "x"
PROBABILITY_KEY = "p"
DEGENERATE_KEY = "degenerate"
FAMILY_KEY = "family"
LOC_KEY = "loc"
SCALE_OR_SIGMA_KEY = "scale_or_sigma"
KNOTS_KEY = "knots"
LOG_COEFFS_KEY = "log_coeffs"
PAIR_X_KEY = "x"
PAIR_Y_KEY = "y"

# Report keys
VERDICT_KEY = "verdict"
WORST_MARGIN_KEY = "worst_margin"
WITNESS_KEY = "witness_a"
METHOD_KEY = "method"

# Gamble validation
PROBABILITY_SUM_TOLERANCE = 1e-12
PROBABILITY_PRUNE_THRESHOLD = 1e-15

# Riskiness root solver
RISKINESS_BISECTION_STEPS = 80
RISKINESS_STOP_RESIDUAL = 1e-12
RISKINESS_RESIDUAL_TOLERANCE = 1e-10
RISKINESS_MAX_DOUBLINGS = 2000

# Background risk grids
SIZE_GRID_POINTS = 4097
SIZE_GRID_QUANTILE_LOW = 1e-9
SIZE_GRID_QUANTILE_HIGH = 1.0 - 1e-9
CDF_ROUND_TRIP_TOLERANCE = 1e-9
SIZE_COMPARISON_TOLERANCE = 1e-12

# Dominance grid
DOMINANCE_GRID_POINTS = 8193
DOMINANCE_GRID_QUANTILE_LOW = 1e-12
DOMINANCE_GRID_QUANTILE_HIGH = 1.0 - 1e-12
DOMINANCE_LINEAR_POINTS = 2049
DOMINANCE_REFINEMENT_PASSES = 2
DOMINANCE_REFINEMENT_FACTOR = 8
DOMINANCE_REFINEMENT_THRESHOLD = 1e-6
MARGIN_TOLERANCE = 1e-12
SCALE_BISECTION_STEPS = 60

# Thresholds / tables
TABLE_GAMBLES = (
    (11.0, 10.0),
    (55.0, 50.0),
    (110.0, 100.0),
    (550.0, 500.0),
    (1100.0, 1000.0),
)
TABLE1_NORMAL_MU = 100000.0
TABLE1_LIABILITY = 0.0

# CPT
CPT_DEFAULT_GAMMA = 0.61
CPT_DEFAULT_DELTA = 0.69
CPT_DEFAULT_LAMBDA = 2.25
CPT_DEFAULT_RHO = 0.88
CPT_DEFAULT_POINTS = 20000
CPT_FAST_POINTS = 5000
CPT_MIN_POINTS = 1000
CPT_QUANTILE_LOW = 1e-7
CPT_QUANTILE_HIGH = 1.0 - 1e-7
CPT_SIGMA_CEILING = 1e7
CPT_SIGMA_RESOLUTION = 0.1
CPT_MONOTONE_CHECK_FACTORS = (1.1, 1.25, 1.5, 2.0, 4.0)

# Two gambles
PAIR_RELATIVE_TOLERANCE = 1e-10
MIN_S_RELATIVE_RESOLUTION = 1e-10
MIN_S_SCAN_POINTS = 16
MIN_S_SCAN_DECADES = 2.0
MIN_S_FLOOR_FACTOR = 1e-9
TWO_SIDED_SWEEP_RESOLUTION = 1e-3

# Oracles
ORACLE_DEFAULT_SAMPLES = 1000000
ORACLE_MIN_SAMPLES = 10000
ORACLE_DEFAULT_SEED = 42
ORACLE_GRID_POINTS = 512
ORACLE_BLOCK_SIZE = 65536
ORACLE_SIGMA_THRESHOLD = 4.0

# Rejection sweep
REJECTION_SWEEP_STEPS = 21
MIN_MASS_ABOVE_LIABILITY = 1e-12
QUAD_EPSABS = 1e-15
QUAD_EPSREL = 1e-11
QUAD_LIMIT = 200


class BackgroundFamily(StrEnum):
    """Supported background-risk families."""
    LAPLACE = "laplace"
    LOGISTIC = "logistic"
    NORMAL = "normal"
    PIECEWISE = "piecewise"


class Verdict(StrEnum):
    """Outcomes of a dominance check."""
    DOMINANT = "Dominant"
    NOT_DOMINANT = "NotDominant"
    SUFFICIENT_CONDITION_MET = "SufficientConditionMet"
    INCONCLUSIVE = "Inconclusive"


class Method(StrEnum):
    """How a verdict was reached."""
    THEOREM_BOUND = "TheoremBound"
    GRID_VERIFICATION = "GridVerification"
    MONTE_CARLO = "MonteCarlo"


class MarginKind(StrEnum):
    """What a dominance report's worst_margin measures.

    ABSOLUTE is the CDF (or integrated-CDF) difference on the grid. LOG_RATIO is
    ln E[G(a - Y)] - ln E[G(a - X)] at a tail witness (survival functions in the right
    tail), where the absolute difference underflows. MEAN is E[X] - E[Y]."""
    ABSOLUTE = "absolute"
    LOG_RATIO = "log_ratio"
    MEAN = "mean"


class OracleOutcome(StrEnum):
    """Monte Carlo oracle outcomes. The oracle can refute dominance, never certify it."""
    CONSISTENT_WITH_DOMINANCE = "ConsistentWithDominance"
    VIOLATION_FOUND = "ViolationFound"


class DominanceOrder(StrEnum):
    """Stochastic dominance order checked on the grid."""
    FIRST = "first"
    SECOND = "second"
