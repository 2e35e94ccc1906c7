"""Command line interface: ``lucaskit compute|digits|verify|table|bench``.

Exit codes: 0 success (or all lemmas PASS), 1 a lemma FAILed, 2 usage error,
3 non-prime modulus. Machine-readable output goes to stdout, diagnostics to
stderr.
"""
import argparse
import sys
import time
import typing

import numpy as np
import pandas as pd
from loguru import logger

from . import __version__
from .config import load_settings
from .exact_oracle import binom_exact, pascal_table_mod_p
from .exceptions import (
    CapExceededError,
    ConfigurationError,
    MalformedNumberError,
    NotPrimeError,
)
from .lucas import lucas_binom_str
from .radix import WORD_LIMIT, parse_decimal, to_digits
from .utils.formatting import format_duration
from .utils.logging.loguru import set_up_logger, verbosity_to_level
from .verify import SweepConfig, format_report, parse_selection, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NOT_PRIME = 3

MAX_BENCH_DIGITS = 10**5


def _decimal(text: str) -> int:
    try:
        return parse_decimal(text)
    except MalformedNumberError as error:
        raise argparse.ArgumentTypeError(str(error)) from None


def _word(text: str) -> int:
    value = _decimal(text)
    if value >= WORD_LIMIT:
        raise argparse.ArgumentTypeError(f"modulus must be below 2**64, got {text}")
    return value


def _bounded(low: int, high: typing.Optional[int] = None) -> typing.Callable:
    def convert(text: str) -> int:
        value = _decimal(text)
        if value < low or (high is not None and value > high):
            upper = "" if high is None else f", {high}"
            raise argparse.ArgumentTypeError(f"expected a value in [{low}{upper}]")
        return value

    return convert


def _prime_list(text: str) -> typing.List[int]:
    items = text.split(",")
    if not all(items):
        raise argparse.ArgumentTypeError(
            f"expected comma separated primes, got {text!r}",
        )
    return [_word(item) for item in items]


def setup_main_parser() -> argparse.ArgumentParser:
    """Build the ``lucaskit`` argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="lucaskit",
        description="Binomial coefficients modulo a prime via Lucas' theorem.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log more (-v INFO, -vv DEBUG) to stderr",
    )
    parser.add_argument(
        "--log-file",
        default=None,
        help="also log at TRACE to this file",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    compute = subparsers.add_parser("compute", help="print C(m, n) mod p")
    compute.add_argument("m")
    compute.add_argument("n")
    compute.add_argument("p", type=_word)
    compute.set_defaults(handler=cmd_compute)

    digits = subparsers.add_parser("digits", help="print the base-p digits of n")
    digits.add_argument("n")
    digits.add_argument("p", type=_word)
    digits.set_defaults(handler=cmd_digits)

    verify = subparsers.add_parser("verify", help="run lemma verification sweeps")
    verify.add_argument("lemma_ids", nargs="+", metavar="lemma_id")
    verify.add_argument("--primes", type=_prime_list, default=[2, 3, 5])
    verify.add_argument("--max-n", type=_bounded(0), default=300)
    verify.add_argument("--degree-cap", type=_bounded(0), default=None)
    verify.add_argument("--factorial-cap", type=_bounded(0), default=None)
    verify.add_argument("--jobs", type=_bounded(1), default=1)
    verify.set_defaults(handler=cmd_verify)

    table = subparsers.add_parser("table", help="print Pascal's triangle mod p")
    table.add_argument("p", type=_word)
    table.add_argument("rows", type=_bounded(0))
    table.add_argument("--format", choices=["text", "csv"], default="text")
    table.set_defaults(handler=cmd_table)

    bench = subparsers.add_parser("bench", help="time lucas_binom on random operands")
    bench.add_argument("--digits", type=_bounded(1, MAX_BENCH_DIGITS), default=1000)
    bench.add_argument("--reps", type=_bounded(1), default=10)
    bench.add_argument("--prime", type=_word, default=1000003)
    bench.add_argument("--seed", type=_bounded(0), default=0)
    bench.set_defaults(handler=cmd_bench)

    return parser


def cmd_compute(args: argparse.Namespace) -> int:
    print(lucas_binom_str(args.m, args.n, args.p))
    return EXIT_OK


def cmd_digits(args: argparse.Namespace) -> int:
    expansion = to_digits(parse_decimal(args.n), args.p)
    print(" ".join(str(d) for d in expansion))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    selection = parse_selection(args.lemma_ids)
    cfg = SweepConfig.from_settings(
        args.primes,
        args.max_n,
        parallelism=args.jobs,
        degree_cap=args.degree_cap,
        factorial_cap=args.factorial_cap,
    )
    reports = run_suite(cfg, selection)
    sys.stdout.write(format_report(reports))
    if all(report.status == "PASS" for report in reports):
        return EXIT_OK
    return EXIT_FAIL


def cmd_table(args: argparse.Namespace) -> int:
    table = pascal_table_mod_p(args.rows, args.p)
    width = len(str(args.p - 1))
    for row in table:
        values = [str(int(v)) for v in row]
        if args.format == "csv":
            print(",".join(values))
        else:
            print(" ".join(v.ljust(width) for v in values).rstrip())
    return EXIT_OK


def _random_operand(rng: np.random.Generator, digits: int) -> str:
    """A uniformly random decimal string with exactly ``digits`` digits."""
    leading = rng.integers(1, 10)
    rest = rng.integers(0, 10, size=digits - 1)
    return str(leading) + "".join(rest.astype(str))


def _median_time(func: typing.Callable[[], object], reps: int) -> float:
    timings = []
    for _ in range(reps):
        start = time.perf_counter()
        func()
        timings.append(time.perf_counter() - start)
    return float(pd.Series(timings).median())


def cmd_bench(args: argparse.Namespace) -> int:
    """Time lucas_binom_str on two random operands of the requested length.

    One untimed call first builds the factorial tables of the prime. When the
    operand fits below the factorial cap the exact oracle is timed too, and its
    residue is compared with the Lucas one.
    """
    rng = np.random.default_rng(args.seed)
    m, n = sorted(
        (_random_operand(rng, args.digits), _random_operand(rng, args.digits)),
        reverse=True,
    )
    logger.debug(f"Benchmark operands: m has {len(m)} digits, n has {len(n)} digits")

    residue = lucas_binom_str(m, n, args.prime)
    median = _median_time(lambda: lucas_binom_str(m, n, args.prime), args.reps)
    print(
        f"lucas digits={args.digits} reps={args.reps} p={args.prime} "
        f"median={format_duration(median)}",
    )

    cap = load_settings().factorial_cap
    m_value = parse_decimal(m)
    if m_value <= cap:
        n_value = parse_decimal(n)
        expected = binom_exact(m_value, n_value) % args.prime
        median = _median_time(lambda: binom_exact(m_value, n_value), args.reps)
        agree = "true" if expected == residue.value else "false"
        print(
            f"oracle digits={args.digits} reps={args.reps} p={args.prime} "
            f"median={format_duration(median)} agree={agree}",
        )
    else:
        logger.info(f"Skipping the oracle: operand exceeds factorial_cap={cap}")

    return EXIT_OK


def _error(error: Exception, code: int) -> int:
    print(f"error: {error}", file=sys.stderr)
    return code


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    """Parse ``argv``, run the subcommand and return its exit code."""
    parser = setup_main_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return EXIT_OK if exit_.code is None else int(exit_.code)

    try:
        settings = load_settings()
        set_up_logger(
            verbosity_to_level(args.verbose, settings.log_level),
            log_file=args.log_file,
        )
        logger.debug(f"Running {args.command} with {vars(args)}")
        return args.handler(args)
    except NotPrimeError as error:
        return _error(error, EXIT_NOT_PRIME)
    except (ConfigurationError, CapExceededError, MalformedNumberError) as error:
        return _error(error, EXIT_USAGE)


def run() -> None:
    """Console script entry point."""
    sys.exit(main())
