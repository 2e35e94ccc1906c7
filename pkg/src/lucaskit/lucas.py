"""C(m, n) mod p in time linear in the number of base-p digits."""
import threading
import typing
from dataclasses import dataclass

from loguru import logger

from .exceptions import DigitRangeError
from .radix import (
    PrimeModulus,
    Residue,
    _check_natural,
    as_modulus,
    padded_pair,
    parse_decimal,
    to_digits,
)

__all__ = [
    "Residue",
    "factorial_tables",
    "lucas_binom",
    "lucas_binom_str",
    "single_digit_binom",
]

# below this bound single-digit binomials are served from precomputed tables
TABLE_LIMIT = 2**20


@dataclass(frozen=True)
class _FactorialTables:
    factorials: typing.Tuple[int, ...]
    inverse_factorials: typing.Tuple[int, ...]


_tables: typing.Dict[int, _FactorialTables] = {}
_tables_lock = threading.Lock()


def _build_tables(p: int) -> _FactorialTables:
    logger.debug(f"Building factorial tables mod {p}")
    fac = [1] * p
    inv = [1] * p
    facinv = [1] * p
    for i in range(2, p):
        fac[i] = fac[i - 1] * i % p
        inv[i] = (p - inv[p % i] * (p // i)) % p
        facinv[i] = facinv[i - 1] * inv[i] % p
    return _FactorialTables(tuple(fac), tuple(facinv))


def factorial_tables(p: typing.Union[int, PrimeModulus]) -> _FactorialTables:
    """Return the factorial and inverse-factorial tables mod p, building them once.

    Raises
    ------
    ValueError
        if p is not below the table limit
    """
    modulus = as_modulus(p)
    if modulus.p >= TABLE_LIMIT:
        raise ValueError(f"factorial tables are only kept for p < {TABLE_LIMIT}")

    tables = _tables.get(modulus.p)
    if tables is None:
        with _tables_lock:
            tables = _tables.get(modulus.p)
            if tables is None:
                tables = _build_tables(modulus.p)
                _tables[modulus.p] = tables
    return tables


def _binom_small(a: int, b: int, p: int) -> int:
    """C(a, b) mod p for 0 <= b <= a < p, assuming a valid modulus."""
    if p < TABLE_LIMIT:
        tables = factorial_tables(p)
        return (
            tables.factorials[a]
            * tables.inverse_factorials[b]
            % p
            * tables.inverse_factorials[a - b]
            % p
        )

    # every nonzero residue is a unit mod a prime: invert by Fermat
    b = min(b, a - b)
    numerator, denominator = 1, 1
    for j in range(b):
        numerator = numerator * (a - j) % p
        denominator = denominator * (j + 1) % p
    return numerator * pow(denominator, p - 2, p) % p


def single_digit_binom(
    a: int,
    b: int,
    p: typing.Union[int, PrimeModulus],
) -> Residue:
    """Compute C(a, b) mod p for single base-p digits a and b.

    Parameters
    ----------
    a, b : int
        digits in [0, p)
    p : int or PrimeModulus

    Returns
    -------
    Residue
        C(a, b) mod p, zero when b > a

    Raises
    ------
    DigitRangeError
        if a or b is not a base-p digit
    """
    modulus = as_modulus(p)
    for digit in (a, b):
        if not 0 <= digit < modulus.p:
            raise DigitRangeError(digit, modulus.p)

    if b > a:
        return Residue(0, modulus)
    return Residue(_binom_small(a, b, modulus.p), modulus)


def lucas_binom(m: int, n: int, p: typing.Union[int, PrimeModulus]) -> Residue:
    """Compute C(m, n) mod p as the product of C(a_i, b_i) over the base-p digits.

    Parameters
    ----------
    m, n : int
        natural numbers of any size; C(m, n) = 0 when m < n
    p : int or PrimeModulus

    Returns
    -------
    Residue

    Example
    -------
    >>> int(lucas_binom(10, 3, 7))
    1
    """
    modulus = as_modulus(p)
    _check_natural(m, "m")
    _check_natural(n, "n")
    if m < n:
        return Residue(0, modulus)

    top, bottom = padded_pair(to_digits(m, modulus), to_digits(n, modulus))

    result = 1
    for a_i, b_i in zip(top, bottom):
        if b_i > a_i:
            return Residue(0, modulus)
        # C(a, 0) = C(a, a) = 1
        if b_i and b_i != a_i:
            result = result * _binom_small(a_i, b_i, modulus.p) % modulus.p

    return Residue(result, modulus)


def lucas_binom_str(m: str, n: str, p: typing.Union[int, PrimeModulus]) -> Residue:
    """Parse two decimal strings and evaluate C(m, n) mod p.

    Raises
    ------
    MalformedNumberError
        if m or n is not a plain decimal natural
    """
    return lucas_binom(parse_decimal(m), parse_decimal(n), p)
