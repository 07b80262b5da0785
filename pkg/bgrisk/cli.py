"""Command line front end for the bgrisk library."""
import argparse
import logging
import math
import sys
from typing import Optional

import voluptuous as vol

from .const import (
    LOGGER,
    PROG,
    EXIT_OK,
    EXIT_NUMERICAL_FAILURE,
    EXIT_INPUT_ERROR,
    FORMAT_CSV,
    FORMAT_JSON,
    OUTPUT_FORMATS,
    DEFAULT_LOG_LEVEL,
    DEFAULT_U_SCALE,
    LOG_FORMAT,
    LOG_LEVELS,
    FAST_CAVEAT,
)
from .inputs import load_background, load_gamble, load_pair
from .tables import render, threshold_row_to_dict
from .pybgrisk import (
    CPT_DEFAULT_POINTS,
    CPT_FAST_POINTS,
    ORACLE_DEFAULT_SAMPLES,
    ORACLE_DEFAULT_SEED,
    TABLE1_LIABILITY,
    TABLE1_NORMAL_MU,
    BackgroundFamily,
    CptParams,
    DominanceOrder,
    Helpers,
    InputValidationError,
    OracleConfig,
    PyBgRiskError,
    background_from_stdev,
    cpt_sigma_threshold,
    cpt_table,
    fosd_check,
    fosd_verify_limited_liability,
    gamble_label,
    mc_fosd_oracle,
    mc_sosd_oracle,
    min_s_for_dominance,
    rejection_sweep,
    riskiness,
    sigma_threshold,
    size_report,
    small_negative_gamble_rejection,
    sosd_verify,
    strong_convex_dominance,
    table1,
    two_sided_sufficiency,
    weighted_integral_criterion,
)

_LOGGER = logging.getLogger(LOGGER)


class UsageError(Exception):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports errors on one line instead of exiting."""

    def error(self, message):
        raise UsageError(message)


def _label(gamble) -> str:
    if len(gamble.values) == 2 and gamble.probabilities[0] == gamble.probabilities[1] == 0.5:
        return gamble_label(gamble.max_value, -gamble.min_value)
    return "custom"


def _background(args):
    """--dist JSON, or a named family given by --family/--mu/--sigma."""
    if args.dist is not None:
        if args.sigma is not None:
            raise InputValidationError("give either --dist or --sigma, not both")
        return load_background(args.dist)
    if args.sigma is None or args.family is None:
        raise InputValidationError("a background risk needs --dist or --family with --sigma")
    return background_from_stdev(args.family, args.mu, args.sigma)


def _fast_points(args) -> int:
    if args.fast:
        print(FAST_CAVEAT.format(points=CPT_FAST_POINTS), file=sys.stderr)
        return CPT_FAST_POINTS
    return args.points


# Subcommands -------------------------------------------------------------------

def cmd_riskiness(args):
    return riskiness(load_gamble(args.gamble)).to_dict()


def cmd_size(args):
    return size_report(_background(args)).to_dict()


def cmd_check_fosd(args):
    x, w = load_gamble(args.gamble), _background(args)
    if args.ell is not None:
        return fosd_verify_limited_liability(x, w, args.ell).to_dict()
    return fosd_check(x, w).to_dict()


def cmd_check_sosd(args):
    return sosd_verify(load_gamble(args.gamble), _background(args)).to_dict()


def cmd_threshold(args):
    x = load_gamble(args.gamble)
    value = sigma_threshold(x, BackgroundFamily(args.family), args.mu, args.ell)
    if args.round:
        value = Helpers.round_up(value)
    return {"gamble": _label(x), "family": args.family, "value": value}


def cmd_table(args):
    if args.which == 1:
        rows = table1(args.mu, args.ell)
    else:
        rows = cpt_table(CptParams(), _fast_points(args))
    return [threshold_row_to_dict(row, args.round) for row in rows]


def cmd_cpt_threshold(args):
    x = load_gamble(args.gamble)
    value = cpt_sigma_threshold(x, BackgroundFamily(args.family), CptParams(), _fast_points(args))
    if args.round:
        value = Helpers.round_up(value)
    return {"gamble": _label(x), "family": args.family, "value": value}


def cmd_compare(args):
    x, y = load_pair(args.pair)
    if args.s is not None:
        return weighted_integral_criterion(x, y, args.s).to_dict()
    if args.dist is not None or args.sigma is not None:
        return two_sided_sufficiency(x, y, _background(args)).to_dict()
    return strong_convex_dominance(x, y).to_dict()


def cmd_min_s(args):
    x, y = load_pair(args.pair)
    value = min_s_for_dominance(x, y)
    if math.isinf(value):
        return {"value": None, "finite": False}
    return {"value": value, "finite": True}


def cmd_oracle(args):
    x, w = load_gamble(args.gamble), _background(args)
    config = OracleConfig(samples=args.samples, seed=args.seed)
    oracle = mc_sosd_oracle if args.order == DominanceOrder.SECOND else mc_fosd_oracle
    return oracle(x, w, config).to_dict()


def cmd_demo_rejection(args):
    x, w = load_gamble(args.gamble), _background(args)
    t_bar = small_negative_gamble_rejection(x, w, args.ell, args.u_scale)
    sweep = rejection_sweep(x, w, args.ell, args.u_scale)
    rows = [{"t": t, "difference": difference} for t, difference in sweep]
    if args.format == FORMAT_CSV:
        return rows
    return {"t_bar": t_bar, "sweep": rows}


# Parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=FORMAT_JSON)
    common.add_argument("--log-level", choices=LOG_LEVELS, default=DEFAULT_LOG_LEVEL)

    parser = _Parser(prog=PROG, description="Riskiness, background-risk size and dominance.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, handler, help_text, aliases=()):
        sub = commands.add_parser(name, parents=[common], help=help_text, aliases=list(aliases))
        sub.set_defaults(handler=handler)
        return sub

    def add_cpt_points(sub):
        sub.add_argument("--points", type=int, default=CPT_DEFAULT_POINTS)
        sub.add_argument("--fast", action="store_true")

    families = [str(f) for f in BackgroundFamily if f != BackgroundFamily.PIECEWISE]

    def add_background(sub):
        sub.add_argument("--dist")
        sub.add_argument("--family", choices=families)
        sub.add_argument("--mu", type=float, default=0.0)
        sub.add_argument("--sigma", type=float)

    sub = command("riskiness", cmd_riskiness, "riskiness R(X) of a gamble")
    sub.add_argument("--gamble", required=True)

    sub = command("size", cmd_size, "size indices of a background risk")
    add_background(sub)

    sub = command("check-fosd", cmd_check_fosd, "first-order dominance of W + X over W")
    sub.add_argument("--gamble", required=True)
    add_background(sub)
    sub.add_argument("--ell", type=float)

    sub = command("check-sosd", cmd_check_sosd, "second-order dominance of W + X over W")
    sub.add_argument("--gamble", required=True)
    add_background(sub)

    sub = command("threshold", cmd_threshold, "sufficient sigma for one gamble")
    sub.add_argument("--gamble", required=True)
    sub.add_argument("--family", choices=families, required=True)
    sub.add_argument("--mu", type=float)
    sub.add_argument("--ell", type=float)
    sub.add_argument("--round", action="store_true")

    sub = command("table", cmd_table, "sufficient-sigma tables")
    sub.add_argument("--which", type=int, choices=(1, 2), required=True)
    sub.add_argument("--mu", type=float, default=TABLE1_NORMAL_MU)
    sub.add_argument("--ell", type=float, default=TABLE1_LIABILITY)
    sub.add_argument("--round", action="store_true")
    add_cpt_points(sub)

    sub = command("cpt-threshold", cmd_cpt_threshold, "prospect-theory sigma threshold")
    sub.add_argument("--gamble", required=True)
    sub.add_argument("--family", choices=families, required=True)
    sub.add_argument("--round", action="store_true")
    add_cpt_points(sub)

    sub = command("compare", cmd_compare, "choose X over Y")
    sub.add_argument("--pair", required=True)
    add_background(sub)
    sub.add_argument("--s", type=float)

    sub = command("min-s", cmd_min_s, "smallest s for the weighted integral criterion")
    sub.add_argument("--pair", required=True)

    sub = command("oracle", cmd_oracle, "Monte Carlo dominance oracle")
    sub.add_argument("--gamble", required=True)
    add_background(sub)
    sub.add_argument("--seed", type=int, default=ORACLE_DEFAULT_SEED)
    sub.add_argument("--samples", type=int, default=ORACLE_DEFAULT_SAMPLES)
    sub.add_argument("--order", choices=[str(o) for o in DominanceOrder],
                     default=str(DominanceOrder.FIRST))

    sub = command("demo-appendix-b", cmd_demo_rejection,
                  "limited-liability rejection of small negative-mean gambles",
                  aliases=["demo-rejection"])
    sub.add_argument("--gamble", required=True)
    add_background(sub)
    sub.add_argument("--ell", type=float, required=True)
    sub.add_argument("--u-scale", type=float, default=DEFAULT_U_SCALE)

    return parser


def _fail(message: str, status: int) -> int:
    print(f"{PROG}: error: {message}", file=sys.stderr)
    return status


def run(argv: Optional[list[str]] = None) -> int:
    """Parse, dispatch and print. Returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_OK

    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr)
    _LOGGER.debug("run: %s", args)
    try:
        document = args.handler(args)
    except (InputValidationError, vol.Invalid) as exc:
        return _fail(" ".join(str(exc).split()), EXIT_INPUT_ERROR)
    except PyBgRiskError as exc:
        return _fail(" ".join(str(exc).split()), EXIT_NUMERICAL_FAILURE)
    except ArithmeticError as exc:
        _LOGGER.debug("arithmetic failure", exc_info=True)
        return _fail(f"numerical failure: {exc}", EXIT_NUMERICAL_FAILURE)

    sys.stdout.write(render(document, args.format))
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))
