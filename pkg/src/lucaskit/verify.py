"""Lemma-by-lemma verification sweeps over ranges of n and p.

Every lemma has a case enumerator and a checker. Cases are enumerated in a
fixed order (by n, then p, then k, then i), checked either in-process or on a
process pool, and merged back in submission order, so a report does not depend
on the degree of parallelism.
"""
import enum
import functools
import math
import typing
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass

import pandas as pd
from loguru import logger

from .config import load_settings
from .exact_oracle import binom_row_exact, factorial, pascal_table_mod_p
from .exceptions import ConfigurationError, InexactDivisionError
from .lucas import lucas_binom
from .polymod import (
    PolyModP,
    coeff_extract_check,
    congruence_witness,
    congruent_coeffwise,
    freshman_check,
    interior_vanishing_check,
    poly_pow,
)
from .qfactor import (
    QIndex,
    chain_congruence_check,
    factorize,
    gcd_q_p_check,
    lemma6_check,
    q_family,
    q_mod_p,
    ratio_identity_check,
)
from .radix import PrimeModulus, as_modulus, to_digits

__all__ = [
    "Failure",
    "LemmaId",
    "LemmaReport",
    "SweepConfig",
    "format_report",
    "parse_selection",
    "reports_to_frame",
    "run_suite",
]

# largest p**i for the polynomial expansion sweeps
MAX_BLOCK = 2**12
# largest exponent compared against the additive Pascal oracle
MAX_CONGRUENCE_EXPONENT = 512
LEMMA6_MAX_EXPONENT = 4
# digits a swept by the polynomial suites; covers every digit of primes below 17
MAX_SWEEP_DIGIT = 16


class LemmaId(str, enum.Enum):
    """The verifiable statements, in report order."""

    COEFF_CONGRUENCE = "coeff_congruence"
    Q_INTEGRALITY = "q_integrality"
    Q_MOD_1 = "q_mod_1"
    Q_COPRIME = "q_coprime"
    Q_CHAIN = "q_chain"
    RATIO_IDENTITY = "ratio_identity"
    LEMMA6 = "lemma6"
    FRESHMAN = "freshman"
    COEFF_EXTRACT = "coeff_extract"
    LUCAS_VS_ORACLE = "lucas_vs_oracle"

    def __str__(self) -> str:
        return self.value


# suites whose cases compute factorials or binomials of numbers up to max_n
EXACT_SUITES = frozenset(
    {
        LemmaId.COEFF_CONGRUENCE,
        LemmaId.Q_INTEGRALITY,
        LemmaId.Q_MOD_1,
        LemmaId.Q_COPRIME,
        LemmaId.Q_CHAIN,
        LemmaId.RATIO_IDENTITY,
        LemmaId.LEMMA6,
        LemmaId.LUCAS_VS_ORACLE,
    },
)


@dataclass(frozen=True)
class SweepConfig:
    """Ranges and caps of a verification run.

    Parameters
    ----------
    primes : tuple of PrimeModulus
        moduli to sweep; stored sorted and without duplicates
    max_n : int
        largest n (or m, or exponent) enumerated
    degree_cap : int
        largest polynomial degree formed
    factorial_cap : int
        largest factorial argument formed
    parallelism : int
        number of worker processes, 1 runs in-process
    """

    primes: typing.Tuple[PrimeModulus, ...]
    max_n: int
    degree_cap: int
    factorial_cap: int
    parallelism: int = 1

    def __post_init__(self):
        primes = sorted({as_modulus(p) for p in self.primes}, key=int)
        if not primes:
            raise ConfigurationError("At least one prime is required")
        object.__setattr__(self, "primes", tuple(primes))
        for field in ("max_n", "degree_cap", "factorial_cap"):
            if getattr(self, field) < 0:
                raise ConfigurationError(f"{field} must be non-negative")
        if self.parallelism < 1:
            raise ConfigurationError("parallelism must be at least 1")

    @classmethod
    def from_settings(
        cls,
        primes: typing.Iterable[typing.Union[int, PrimeModulus]],
        max_n: int,
        parallelism: int = 1,
        degree_cap: typing.Optional[int] = None,
        factorial_cap: typing.Optional[int] = None,
    ) -> "SweepConfig":
        """Build a config, taking unset caps from the environment settings."""
        settings = load_settings()
        return cls(
            primes=tuple(primes),
            max_n=max_n,
            degree_cap=settings.degree_cap if degree_cap is None else degree_cap,
            factorial_cap=(
                settings.factorial_cap if factorial_cap is None else factorial_cap
            ),
            parallelism=parallelism,
        )


class Failure(typing.NamedTuple):
    """A failed case with everything needed to replay it."""

    case: tuple
    expected: typing.Any
    got: typing.Any


def _format_value(value) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_format_value(v) for v in value) + "]"
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def _format_case(case: tuple) -> str:
    return "(" + ",".join(str(v) for v in case) + ")"


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of one lemma's sweep."""

    lemma_id: LemmaId
    primes: typing.Tuple[int, ...]
    max_n: int
    cases_run: int
    failures: typing.Tuple[Failure, ...] = ()

    @property
    def status(self) -> str:
        return "PASS" if not self.failures else "FAIL"

    def lines(self) -> typing.List[str]:
        """The report lines: one LEMMA header and one CASE line per failure."""
        header = (
            f"LEMMA {self.lemma_id} primes={','.join(str(p) for p in self.primes)} "
            f"max_n={self.max_n} cases={self.cases_run} status={self.status}"
        )
        cases = [
            f"CASE {_format_case(f.case)} expected={_format_value(f.expected)} "
            f"got={_format_value(f.got)}"
            for f in self.failures
        ]
        return [header] + cases


CheckResult = typing.Tuple[int, typing.List[Failure]]


def _single(case: tuple, expected, got) -> CheckResult:
    if expected == got:
        return 1, []
    return 1, [Failure(case, expected, got)]


def _n_p_cases(cfg: SweepConfig) -> typing.List[tuple]:
    return [(n, p) for n in range(1, cfg.max_n + 1) for p in cfg.primes]


def _chain_cases(cfg: SweepConfig) -> typing.List[tuple]:
    cases = []
    for n, p in _n_p_cases(cfg):
        digits = to_digits(n, p)
        for k in range(1, len(digits)):
            if digits[k]:
                cases.append((n, p, k))
    return cases


def _ratio_cases(cfg: SweepConfig) -> typing.List[tuple]:
    return [
        (n, p, k, i)
        for n, p, k in _chain_cases(cfg)
        for i in range(to_digits(n, p)[k])
    ]


def _coeff_congruence_exponent(cfg: SweepConfig) -> int:
    return min(cfg.max_n, cfg.degree_cap, MAX_CONGRUENCE_EXPONENT)


def _coeff_congruence_cases(cfg: SweepConfig) -> typing.List[tuple]:
    top = _coeff_congruence_exponent(cfg)
    return [(e, p) for e in range(top + 1) for p in cfg.primes]


def _block_exponents(p: PrimeModulus) -> typing.Iterator[int]:
    i = 0
    while p.p**i <= MAX_BLOCK:
        yield i
        i += 1


def _sweep_digits(p: PrimeModulus, start: int) -> range:
    return range(start, min(p.p, MAX_SWEEP_DIGIT + 1))


def _lemma6_cases(cfg: SweepConfig) -> typing.List[tuple]:
    cases = [
        (a * p.p**i, p, i, a)
        for p in cfg.primes
        for i in range(LEMMA6_MAX_EXPONENT + 1)
        for a in range(min(p.p, cfg.max_n + 1))
        if a * p.p**i <= cfg.max_n
    ]
    return sorted(cases, key=lambda c: (c[0], c[1].p, c[2], c[3]))


def _freshman_cases(cfg: SweepConfig) -> typing.List[tuple]:
    cases = [
        (a * p.p**i, p, i, a)
        for p in cfg.primes
        for i in _block_exponents(p)
        for a in _sweep_digits(p, 1)
        if a * p.p**i <= cfg.degree_cap
    ]
    return sorted(cases, key=lambda c: (c[0], c[1].p, c[2], c[3]))


def _coeff_extract_cases(cfg: SweepConfig) -> typing.List[tuple]:
    cases = [
        (a * p.p**i, p, i, a, b)
        for p in cfg.primes
        for i in _block_exponents(p)
        for a in _sweep_digits(p, 0)
        if a * p.p**i <= cfg.degree_cap
        for b in range(a + 1)
    ]
    return sorted(cases, key=lambda c: (c[0], c[1].p, c[2], c[3], c[4]))


def _lucas_rows(cfg: SweepConfig) -> typing.List[tuple]:
    return [(m, p) for m in range(cfg.max_n + 1) for p in cfg.primes]


@functools.lru_cache(maxsize=16)
def _pascal_table(rows: int, p: PrimeModulus):
    return pascal_table_mod_p(rows, p, cap=rows)


def _check_coeff_congruence(case: tuple, cfg: SweepConfig) -> CheckResult:
    e, p = case
    rows = _coeff_congruence_exponent(cfg) + 1
    additive = PolyModP.from_coefficients(_pascal_table(rows, p).row(e), p)
    expansion = poly_pow(
        PolyModP.from_coefficients([1, 1], p),
        e,
        degree_cap=cfg.degree_cap,
    )
    exact = binom_row_exact(e, cap=cfg.factorial_cap)

    congruent = congruent_coeffwise(expansion, additive)
    has_witness = congruence_witness(exact, [int(c) for c in expansion.coeffs], p)
    if congruent and has_witness is not None:
        return 1, []
    got = [int(c) for c in expansion.coeffs]
    return 1, [Failure(case, [int(c) for c in additive.coeffs], got)]


def _check_q_integrality(case: tuple, cfg: SweepConfig) -> CheckResult:
    n, p = case
    try:
        factorization = factorize(n, p, cap=cfg.factorial_cap)
    except InexactDivisionError:
        return 1, [Failure(case, "exact", "inexact")]
    recomposed = factorization.q * factorization.block_product
    got = "exact" if recomposed == factorial(n, cap=cfg.factorial_cap) else "mismatch"
    return _single(case, "exact", got)


def _check_q_mod_1(case: tuple, cfg: SweepConfig) -> CheckResult:
    n, p = case
    return _single(case, 1, q_mod_p(n, p, cap=cfg.factorial_cap).value)


def _check_q_coprime(case: tuple, cfg: SweepConfig) -> CheckResult:
    n, p = case
    return _single(case, True, gcd_q_p_check(n, p, cap=cfg.factorial_cap))


def _check_q_chain(case: tuple, cfg: SweepConfig) -> CheckResult:
    n, p, k = case
    cap = cfg.factorial_cap
    q_residue = q_mod_p(n, p, cap=cap).value
    members = [
        q_family(QIndex(n, p, k, i), cap=cap) % p.p
        for i in range(to_digits(n, p)[k] + 1)
    ]
    chain_holds = chain_congruence_check(n, p, k, cap=cap)
    if chain_holds and all(r == q_residue for r in members):
        return 1, []
    return 1, [Failure(case, [q_residue] * len(members), members)]


def _check_ratio_identity(case: tuple, cfg: SweepConfig) -> CheckResult:
    n, p, k, i = case
    holds = ratio_identity_check(QIndex(n, p, k, i), cap=cfg.factorial_cap)
    return _single(case, True, holds)


def _check_lemma6(case: tuple, cfg: SweepConfig) -> CheckResult:
    _, p, i, a = case
    return _single(case, True, lemma6_check(a, i, p, cap=cfg.factorial_cap))


def _check_freshman(case: tuple, cfg: SweepConfig) -> CheckResult:
    _, p, i, a = case
    holds = freshman_check(i, a, p, degree_cap=cfg.degree_cap)
    if a == 1:
        holds = holds and interior_vanishing_check(a, i, p, degree_cap=cfg.degree_cap)
    return _single(case, True, holds)


def _check_coeff_extract(case: tuple, cfg: SweepConfig) -> CheckResult:
    _, p, i, a, b = case
    holds = coeff_extract_check(a, b, i, p, degree_cap=cfg.degree_cap)
    return _single(case, True, holds)


def _check_lucas_row(case: tuple, cfg: SweepConfig) -> CheckResult:
    m, p = case
    row = binom_row_exact(m, cap=cfg.factorial_cap)
    failures = []
    for n, exact in enumerate(row):
        expected = exact % p.p
        got = lucas_binom(m, n, p).value
        if got != expected:
            failures.append(Failure((m, n, p), expected, got))
    return len(row), failures


_SUITES: typing.Dict[LemmaId, tuple] = {
    LemmaId.COEFF_CONGRUENCE: (_coeff_congruence_cases, _check_coeff_congruence),
    LemmaId.Q_INTEGRALITY: (_n_p_cases, _check_q_integrality),
    LemmaId.Q_MOD_1: (_n_p_cases, _check_q_mod_1),
    LemmaId.Q_COPRIME: (_n_p_cases, _check_q_coprime),
    LemmaId.Q_CHAIN: (_chain_cases, _check_q_chain),
    LemmaId.RATIO_IDENTITY: (_ratio_cases, _check_ratio_identity),
    LemmaId.LEMMA6: (_lemma6_cases, _check_lemma6),
    LemmaId.FRESHMAN: (_freshman_cases, _check_freshman),
    LemmaId.COEFF_EXTRACT: (_coeff_extract_cases, _check_coeff_extract),
    LemmaId.LUCAS_VS_ORACLE: (_lucas_rows, _check_lucas_row),
}


def parse_selection(
    ids: typing.Iterable[typing.Union[str, LemmaId]],
) -> typing.List[LemmaId]:
    """Turn lemma ids (or ``all``) into LemmaIds in report order.

    Raises
    ------
    ConfigurationError
        if the selection is empty or names an unknown lemma
    """
    ids = list(ids)
    if not ids:
        raise ConfigurationError("The lemma selection must not be empty")

    selected = set()
    for lemma_id in ids:
        if lemma_id == "all":
            selected.update(LemmaId)
            continue
        try:
            selected.add(LemmaId(lemma_id))
        except ValueError:
            known = ", ".join(member.value for member in LemmaId)
            raise ConfigurationError(
                f"Unknown lemma id {lemma_id!r}",
                f"expected one of all, {known}",
            ) from None

    return [member for member in LemmaId if member in selected]


def _check_consistency(cfg: SweepConfig, selection: typing.List[LemmaId]) -> None:
    exact = [str(lemma_id) for lemma_id in selection if lemma_id in EXACT_SUITES]
    if exact and cfg.max_n > cfg.factorial_cap:
        raise ConfigurationError(
            f"max_n={cfg.max_n} exceeds factorial_cap={cfg.factorial_cap}",
            f"needed by {', '.join(exact)}",
        )


def _run_lemma(
    lemma_id: LemmaId,
    cfg: SweepConfig,
    executor: typing.Optional[Executor],
) -> LemmaReport:
    enumerate_cases, check = _SUITES[lemma_id]
    cases = enumerate_cases(cfg)
    if not cases:
        raise ConfigurationError(
            f"No cases to check for {lemma_id}",
            f"primes={','.join(str(p) for p in cfg.primes)} max_n={cfg.max_n} "
            f"degree_cap={cfg.degree_cap}",
        )
    logger.info(f"Running {lemma_id} over {len(cases)} work items")

    bound_check = functools.partial(check, cfg=cfg)
    if executor is not None and len(cases) > 1:
        chunksize = max(1, math.ceil(len(cases) / (cfg.parallelism * 8)))
        results = list(executor.map(bound_check, cases, chunksize=chunksize))
    else:
        results = [bound_check(case) for case in cases]

    cases_run = sum(count for count, _ in results)
    failures = tuple(failure for _, found in results for failure in found)
    report = LemmaReport(
        lemma_id=lemma_id,
        primes=tuple(p.p for p in cfg.primes),
        max_n=cfg.max_n,
        cases_run=cases_run,
        failures=failures,
    )
    logger.debug(f"{lemma_id}: {cases_run} cases, {len(failures)} failures")
    for failure in failures:
        logger.trace(f"- {failure}")

    return report


def run_suite(
    cfg: SweepConfig,
    selection: typing.Iterable[typing.Union[str, LemmaId]],
) -> typing.List[LemmaReport]:
    """Run the selected lemma sweeps and return one report per lemma, in report order.

    Parameters
    ----------
    cfg : SweepConfig
    selection : iterable of str or LemmaId
        lemma ids, or ``all``

    Returns
    -------
    list of LemmaReport

    Raises
    ------
    ConfigurationError
        if the selection is empty or unknown, or max_n exceeds the factorial cap
        for a suite that computes exact factorials, or a selected lemma has no
        cases in the configured ranges
    """
    lemmas = parse_selection(selection)
    _check_consistency(cfg, lemmas)

    if cfg.parallelism == 1:
        return [_run_lemma(lemma_id, cfg, None) for lemma_id in lemmas]

    with ProcessPoolExecutor(max_workers=cfg.parallelism) as executor:
        return [_run_lemma(lemma_id, cfg, executor) for lemma_id in lemmas]


def format_report(reports: typing.Iterable[LemmaReport]) -> str:
    """Serialize reports to the line-oriented text format."""
    lines = [line for report in reports for line in report.lines()]
    return "\n".join(lines) + "\n" if lines else ""


def reports_to_frame(reports: typing.Iterable[LemmaReport]) -> pd.DataFrame:
    """One row per lemma with its case and failure counts."""
    return pd.DataFrame.from_records(
        [
            {
                "lemma_id": str(report.lemma_id),
                "primes": ",".join(str(p) for p in report.primes),
                "max_n": report.max_n,
                "cases": report.cases_run,
                "failures": len(report.failures),
                "status": report.status,
            }
            for report in reports
        ],
        columns=["lemma_id", "primes", "max_n", "cases", "failures", "status"],
    )
