"""Constants for the bgrisk command line."""

LOGGER = "bgrisk"
PROG = "bgrisk"

EXIT_OK = 0
EXIT_NUMERICAL_FAILURE = 1
EXIT_INPUT_ERROR = 2

FILE_ARGUMENT_PREFIX = "@"

FORMAT_JSON = "json"
FORMAT_CSV = "csv"
FORMAT_PRETTY = "pretty"
OUTPUT_FORMATS = (FORMAT_JSON, FORMAT_CSV, FORMAT_PRETTY)

CSV_FLOAT_FORMAT = "%.10g"
JSON_INDENT = 2

DEFAULT_LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(name)s: %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

DEFAULT_U_SCALE = 100.0

TABLE_COLUMNS = ("gamble", "gain", "loss", "laplace", "logistic", "normal")

FAST_CAVEAT = ("bgrisk: note: --fast uses {points} discretization points; "
               "thresholds may be off by a few dollars")
