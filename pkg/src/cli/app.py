import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.cli.commands import get_command
from src.cli.emit import emit, emit_summary
from src.core.config import DEFAULT_BUDGET, DEFAULT_SEED, OUTPUT_FORMATS
from src.core.errors import EXIT_OK, handle_exception
from src.core.logging import cli_logger
from src.models.schemas import ExperimentConfig

SUBCOMMANDS = ("duke", "blcount", "tx", "equidist", "derangement", "sieve")

HELP = {
    "duke": "classify every curve in the height box at each ell",
    "blcount": "count non-surjective candidates per (x, ell) beside the bound shape",
    "tx": "least prime whose Frobenius passes the free-rank-2 test, per curve",
    "equidist": "Frobenius class deviations over the F_p family",
    "derangement": "per det-coset derangement ratios for the maximal subgroup families",
    "sieve": "L(Q) and the large-sieve bound for a demo set",
}


def int_list(raw: str) -> List[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{raw}'")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--height", type=int_list, help="height bound x (comma list for blcount/sieve)")
    common.add_argument("--ell", type=int_list, help="primes ell, comma separated")
    common.add_argument("--budget", type=int, help=f"largest prime consulted (default {DEFAULT_BUDGET})")
    common.add_argument("--primes", type=int_list, help="primes p for equidist")
    common.add_argument("--ell-cap", type=int, dest="ell_cap", help="largest ell for exhaustive group scans")
    common.add_argument("--shards", type=int, help="number of work items the grid is cut into")
    common.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--out", help="output file; stdout when omitted")
    common.add_argument("--summary", help="also write the run aggregates as JSON to this file")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="csv (default) or json")
    common.add_argument("--demo", choices=("zero", "even-numerator", "half"), help="sieve demo set")
    common.add_argument("--log-window", type=float, dest="log_window", help="tx window p <= b log x")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galois-sieve",
        description="Desk-scale experiments on Galois images, sieves and Frobenius statistics",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = _common_options()
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    given: Dict[str, Any] = {k: v for k, v in vars(args).items() if v is not None}
    return ExperimentConfig.build(**given)


def run(config: ExperimentConfig) -> Tuple[List[Dict[str, Any]], Dict[str, Any]]:
    command = get_command(config.subcommand)
    with cli_logger.run(config.subcommand) as outcome:
        rows, summary = command(config)
        outcome.update(summary, rows=len(rows))
    return rows, summary


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        rows, summary = run(config)
        emit(config, rows)
        emit_summary(config, summary)
    except Exception as e:
        payload, exit_code = handle_exception(e)
        cli_logger.log_error(e, {"subcommand": args.subcommand})
        print(json.dumps(payload, default=str), file=sys.stderr)
        return exit_code
    return EXIT_OK
