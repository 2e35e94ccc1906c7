"""Base-p digit expansions of natural numbers.

Digits are stored little-endian: index ``i`` holds the coefficient of ``p**i``,
so ``digits[i]`` is the ``a_i`` of ``n = a_0 + a_1 p + ... + a_l p^l``. Zero is
the empty expansion.
"""
import functools
import re
import typing
from dataclasses import dataclass

from loguru import logger
from sympy.ntheory.primetest import mr

from .exceptions import (
    DigitRangeError,
    MalformedNumberError,
    ModulusMismatchError,
    NotPrimeError,
)

__all__ = [
    "DigitExpansion",
    "PrimeModulus",
    "Residue",
    "as_modulus",
    "find_composite_witness",
    "from_digits",
    "padded_pair",
    "parse_decimal",
    "to_digits",
]

WORD_LIMIT = 2**64

# Miller-Rabin with these bases is deterministic far beyond 2**64
WITNESS_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_DECIMAL = re.compile(r"[0-9]+")
# stays below the interpreter's default int <-> str conversion limit
_DECIMAL_CHUNK = 4000


@functools.lru_cache(maxsize=1024)
def find_composite_witness(p: int) -> typing.Optional[str]:
    """Run the deterministic primality test and describe how p failed it.

    Parameters
    ----------
    p : int
        candidate modulus, expected to be below 2**64

    Returns
    -------
    str or None
        None if p is prime, otherwise the witness path that rejected it
    """
    if p < 2:
        return "lower bound check (p < 2)"
    for base in WITNESS_BASES:
        if p == base:
            return None
        if p % base == 0:
            return f"trial division by {base}"
    for base in WITNESS_BASES:
        if not mr(p, [base]):
            return f"Miller-Rabin round with base {base}"
    return None


@dataclass(frozen=True)
class PrimeModulus:
    """A validated word-sized prime p.

    Parameters
    ----------
    p : int
        the prime

    Raises
    ------
    NotPrimeError
        if p fails the primality test
    ValueError
        if p is not a machine-word sized integer
    """

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise TypeError(f"modulus must be an int, got {type(self.p).__name__}")
        if self.p >= WORD_LIMIT:
            raise ValueError(f"modulus must be below 2**64, got {self.p}")
        witness = find_composite_witness(self.p)
        if witness is not None:
            raise NotPrimeError(self.p, witness)

    def __int__(self) -> int:
        return self.p

    def __str__(self) -> str:
        return str(self.p)


@dataclass(frozen=True)
class Residue:
    """An integer in [0, p) tagged with its modulus."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.p:
            raise DigitRangeError(self.value, self.modulus.p, "Residue out of range")

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


def as_modulus(p: typing.Union[int, PrimeModulus]) -> PrimeModulus:
    """Coerce an int (or an existing PrimeModulus) to a PrimeModulus."""
    if isinstance(p, PrimeModulus):
        return p
    return PrimeModulus(p)


def _check_same_modulus(*moduli: PrimeModulus) -> PrimeModulus:
    """Raise ModulusMismatchError unless all passed moduli are equal."""
    if len(set(moduli)) != 1:
        raise ModulusMismatchError([m.p for m in moduli])
    return moduli[0]


def _check_natural(n: int, name: str = "n") -> None:
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"{name} must be an int, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"{name} must be a natural number, got {n}")


@dataclass(frozen=True)
class DigitExpansion:
    """Little-endian base-p digit vector of a natural number.

    The canonical form has a nonzero last digit; ``padded_pair`` is the only
    producer of non-canonical (zero-padded) expansions.

    Parameters
    ----------
    digits : tuple of int
        ``digits[i]`` is the coefficient of p**i
    modulus : PrimeModulus
        the base p
    """

    digits: typing.Tuple[int, ...]
    modulus: PrimeModulus

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    @property
    def top_index(self) -> int:
        """Index of the highest stored digit (k or l), -1 for zero."""
        return len(self.digits) - 1

    @property
    def is_canonical(self) -> bool:
        """Whether the expansion is in range and carries no trailing zeros."""
        p = self.modulus.p
        in_range = all(0 <= d < p for d in self.digits)
        return in_range and (not self.digits or self.digits[-1] != 0)

    def digit(self, i: int) -> int:
        """Return a_i, which is 0 for every i above the top digit."""
        if i < 0:
            raise IndexError(f"digit index must be non-negative, got {i}")
        return self.digits[i] if i < len(self.digits) else 0

    def upper(self, k: int) -> int:
        """Return a_(k) = floor(n / p**k), the number formed by digits k and above."""
        value = 0
        for d in reversed(self.digits[k:]):
            value = value * self.modulus.p + d
        return value

    def lower(self, k: int) -> int:
        """Return b_(k) = n mod p**k, the number formed by the digits below k."""
        value = 0
        for d in reversed(self.digits[:k]):
            value = value * self.modulus.p + d
        return value


def _chunk_width(p: int) -> typing.Tuple[int, int]:
    """Largest t with p**t below 2**63, and p**t itself."""
    width, power = 1, p
    while power * p < 2**63:
        power *= p
        width += 1
    return width, power


def to_digits(n: int, p: typing.Union[int, PrimeModulus]) -> DigitExpansion:
    """Encode a natural number as its canonical base-p expansion.

    Large operands are peeled in word-sized chunks of ``p**t`` so that only one
    big-integer division is needed per chunk; the chunks are then split with
    machine-sized arithmetic.

    Parameters
    ----------
    n : int
        natural number of any size
    p : int or PrimeModulus
        the base

    Returns
    -------
    DigitExpansion
        canonical expansion, empty for zero

    Example
    -------
    >>> to_digits(10, 7).digits
    (3, 1)
    """
    modulus = as_modulus(p)
    _check_natural(n)
    base = modulus.p

    width, chunk_base = _chunk_width(base)
    digits = []
    while n >= chunk_base:
        n, chunk = divmod(n, chunk_base)
        for _ in range(width):
            chunk, d = divmod(chunk, base)
            digits.append(d)
    while n:
        n, d = divmod(n, base)
        digits.append(d)

    while digits and digits[-1] == 0:
        digits.pop()

    return DigitExpansion(tuple(digits), modulus)


def from_digits(d: DigitExpansion) -> int:
    """Recompose the natural number sum(d[i] * p**i).

    Parameters
    ----------
    d : DigitExpansion

    Returns
    -------
    int

    Raises
    ------
    DigitRangeError
        if any digit is outside [0, p), i.e. the expansion is corrupted
    """
    p = d.modulus.p
    value = 0
    for digit in reversed(d.digits):
        if not 0 <= digit < p:
            raise DigitRangeError(digit, p)
        value = value * p + digit
    return value


def padded_pair(
    m: DigitExpansion,
    n: DigitExpansion,
) -> typing.Tuple[DigitExpansion, DigitExpansion]:
    """Zero-pad two expansions to the common length max(k, l) + 1.

    The result is the internal, non-canonical form used by the digit-wise
    product: a_i = 0 for i > k and b_i = 0 for i > l.

    Raises
    ------
    ModulusMismatchError
        if m and n are expansions in different bases
    """
    modulus = _check_same_modulus(m.modulus, n.modulus)
    length = max(len(m), len(n))

    def pad(d: DigitExpansion) -> DigitExpansion:
        return DigitExpansion(d.digits + (0,) * (length - len(d)), modulus)

    return pad(m), pad(n)


def parse_decimal(text: str) -> int:
    """Parse a plain base-10 natural number of any length.

    Only ASCII digits are accepted: no sign, whitespace, underscores or
    exponent. Strings longer than the interpreter's int conversion limit are
    converted chunk by chunk.

    Raises
    ------
    MalformedNumberError
        if text is not a run of decimal digits
    """
    if not isinstance(text, str) or not _DECIMAL.fullmatch(text):
        raise MalformedNumberError(str(text))

    if len(text) <= _DECIMAL_CHUNK:
        return int(text)

    logger.trace(f"Parsing a {len(text)}-digit decimal in chunks")
    value = 0
    for start in range(0, len(text), _DECIMAL_CHUNK):
        chunk = text[start : start + _DECIMAL_CHUNK]
        value = value * 10 ** len(chunk) + int(chunk)
    return value
