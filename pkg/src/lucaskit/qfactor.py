"""The factorial factorization n! = q * a_0! (a_1 p)! ... (a_l p^l)! and its q family.

For the base-p expansion n = a_0 + a_1 p + ... + a_l p^l, the quotient q is a
natural number congruent to 1 mod p. Fixing a position k with a_k >= 1, the
family

    q_{k,i} = (n - i p^k)! / [a_0! (a_1 p)! ... ((a_k - i) p^k)! ... (a_l p^l)!]

for 0 <= i <= a_k starts at q_{k,0} = q, and consecutive members are congruent
mod p. Everything here is computed exactly and is therefore bounded by the
factorial cap.
"""
import math
import typing
from dataclasses import dataclass

from loguru import logger

from .exact_oracle import binom_exact, factorial
from .exceptions import InexactDivisionError
from .radix import (
    DigitExpansion,
    PrimeModulus,
    Residue,
    _check_natural,
    as_modulus,
    padded_pair,
    to_digits,
)

__all__ = [
    "FactorialFactorization",
    "QIndex",
    "chain_congruence_check",
    "factorize",
    "gcd_q_p_check",
    "lemma6_check",
    "product_identity_check",
    "q_family",
    "q_mod_p",
    "ratio_identity_check",
    "two_digit_closed_form_check",
    "unit_block_ratio_check",
]

Modulus = typing.Union[int, PrimeModulus]
Cap = typing.Optional[int]


def _exact_quotient(dividend: int, divisor: int) -> int:
    quotient, remainder = divmod(dividend, divisor)
    if remainder:
        raise InexactDivisionError(dividend, divisor)
    return quotient


@dataclass(frozen=True)
class FactorialFactorization:
    """n! split into the block factorials (a_i p^i)! and the quotient q.

    Parameters
    ----------
    n : int
    modulus : PrimeModulus
    digits : DigitExpansion
        canonical base-p expansion of n
    blocks : tuple of int
        ``blocks[i] = (a_i p^i)!``
    q : int
        n! divided by the product of the blocks
    """

    n: int
    modulus: PrimeModulus
    digits: DigitExpansion
    blocks: typing.Tuple[int, ...]
    q: int

    @property
    def block_product(self) -> int:
        return math.prod(self.blocks)


def _block_factorials(digits: DigitExpansion, cap: Cap) -> typing.Tuple[int, ...]:
    p = digits.modulus.p
    return tuple(factorial(a * p**i, cap=cap) for i, a in enumerate(digits))


def factorize(n: int, p: Modulus, cap: Cap = None) -> FactorialFactorization:
    """Split n! into q * a_0! (a_1 p)! ... (a_l p^l)!.

    q counts the arrangements of a multiset with block sizes a_i p^i, so the
    division is always exact.

    Parameters
    ----------
    n : int
    p : int or PrimeModulus
    cap : int, optional
        factorial cap, by default the configured one

    Returns
    -------
    FactorialFactorization

    Raises
    ------
    CapExceededError
        if n is above the factorial cap
    InexactDivisionError
        if the quotient is not an integer (cannot happen for a correct implementation)

    Example
    -------
    >>> factorize(5, 3).q
    10
    """
    modulus = as_modulus(p)
    _check_natural(n)
    digits = to_digits(n, modulus)
    n_factorial = factorial(n, cap=cap)
    blocks = _block_factorials(digits, cap)
    q = _exact_quotient(n_factorial, math.prod(blocks))
    logger.trace(f"Factorized {n}! in base {modulus}: digits {digits.digits}, q = {q}")

    return FactorialFactorization(n, modulus, digits, blocks, q)


def q_mod_p(n: int, p: Modulus, cap: Cap = None) -> Residue:
    """Return q mod p for the factorization of n!; this is always 1."""
    factorization = factorize(n, p, cap=cap)
    return Residue(factorization.q % factorization.modulus.p, factorization.modulus)


def gcd_q_p_check(n: int, p: Modulus, cap: Cap = None) -> bool:
    """Check that q and p are relatively prime."""
    factorization = factorize(n, p, cap=cap)
    return math.gcd(factorization.q, factorization.modulus.p) == 1


@dataclass(frozen=True)
class QIndex:
    """Index (n, p, k, i) of a member q_{k,i} of the q family of n.

    Parameters
    ----------
    n : int
    modulus : PrimeModulus
    k : int
        digit position, 1 <= k <= index of the top digit of n
    i : int
        0 <= i <= a_k

    Raises
    ------
    ValueError
        if k or i is outside its range
    """

    n: int
    modulus: PrimeModulus
    k: int
    i: int

    def __post_init__(self):
        object.__setattr__(self, "modulus", as_modulus(self.modulus))
        _check_natural(self.n)
        top = self.digits.top_index
        if not 1 <= self.k <= top:
            raise ValueError(f"k must lie in [1, {top}] for n = {self.n}, got {self.k}")
        if not 0 <= self.i <= self.digit:
            raise ValueError(f"i must lie in [0, {self.digit}], got {self.i}")

    @property
    def digits(self) -> DigitExpansion:
        return to_digits(self.n, self.modulus)

    @property
    def digit(self) -> int:
        """a_k."""
        return self.digits.digit(self.k)

    @property
    def upper(self) -> int:
        """a_(k) = floor(n / p^k)."""
        return self.n // self.modulus.p**self.k

    @property
    def lower(self) -> int:
        """b_(k) = n mod p^k."""
        return self.n % self.modulus.p**self.k

    def successor(self) -> "QIndex":
        """The index with i + 1."""
        return QIndex(self.n, self.modulus, self.k, self.i + 1)


def _q_member(n: int, modulus: PrimeModulus, k: int, i: int, cap: Cap) -> int:
    """q_{k,i} for any 0 <= k <= top index (k = 0 included) and 0 <= i <= a_k."""
    p = modulus.p
    digits = to_digits(n, modulus)
    reduced = list(digits.digits)
    reduced[k] -= i
    numerator = factorial(n - i * p**k, cap=cap)
    denominator = math.prod(factorial(a * p**j, cap=cap) for j, a in enumerate(reduced))
    return _exact_quotient(numerator, denominator)


def q_family(idx: QIndex, cap: Cap = None) -> int:
    """Compute q_{k,i} = (a_(k) p^k + b_(k) - i p^k)! / [... ((a_k - i) p^k)! ...].

    Example
    -------
    >>> q_family(QIndex(7, PrimeModulus(2), k=1, i=1))
    5
    """
    return _q_member(idx.n, idx.modulus, idx.k, idx.i, cap)


def ratio_identity_check(idx: QIndex, cap: Cap = None) -> bool:
    """Check C(n - i p^k, p^k) = (q_{k,i} / q_{k,i+1}) C((a_k - i) p^k, p^k).

    The identity is tested cross-multiplied, q_{k,i+1} * lhs == q_{k,i} * rhs,
    so that everything stays in exact integer arithmetic.

    Raises
    ------
    ValueError
        if i = a_k (there is no successor)
    """
    if idx.i >= idx.digit:
        raise ValueError(f"the ratio identity needs i < a_k = {idx.digit}, got {idx.i}")

    block = idx.modulus.p**idx.k
    lhs = binom_exact(idx.n - idx.i * block, block, cap=cap)
    rhs = binom_exact((idx.digit - idx.i) * block, block, cap=cap)
    q_i = q_family(idx, cap=cap)
    q_next = q_family(idx.successor(), cap=cap)

    return q_next * lhs == q_i * rhs


def chain_congruence_check(n: int, p: Modulus, k: int, cap: Cap = None) -> bool:
    """Check q_{k,0} = q, q_{k,i} = q_{k,i+1} (mod p) for 0 <= i < a_k, and all are = q.

    Positions above the top digit and positions with a_k = 0 carry an empty
    chain and pass vacuously.

    Raises
    ------
    ValueError
        if k < 1
    """
    modulus = as_modulus(p)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    digit = to_digits(n, modulus).digit(k)
    if digit == 0:
        return True

    q = factorize(n, modulus, cap=cap).q
    members = [q_family(QIndex(n, modulus, k, i), cap=cap) for i in range(digit + 1)]
    residues = [member % modulus.p for member in members]

    consecutive = all(a == b for a, b in zip(residues, residues[1:]))
    return members[0] == q and consecutive and residues[0] == q % modulus.p


def unit_block_ratio_check(n: int, p: Modulus, i: int, cap: Cap = None) -> bool:
    """Check the k = 0 member of the ratio identity.

    For 0 <= i < a_0: (n - i) q_{0,i+1} = (a_0 - i) q_{0,i} exactly, and
    n - i = a_0 - i (mod p).
    """
    modulus = as_modulus(p)
    a_0 = to_digits(n, modulus).digit(0)
    if not 0 <= i < a_0:
        raise ValueError(f"i must lie in [0, {a_0}), got {i}")

    q_i = _q_member(n, modulus, 0, i, cap)
    q_next = _q_member(n, modulus, 0, i + 1, cap)
    exact = (n - i) * q_next == (a_0 - i) * q_i
    return exact and (n - i) % modulus.p == (a_0 - i) % modulus.p


def lemma6_check(a: int, i: int, p: Modulus, cap: Cap = None) -> bool:
    """Check (a p^i)! = a! p^(a (1 + p + ... + p^(i-1))) (mod p).

    The factorial is computed exactly (within the cap) and reduced; the power of
    p is reduced directly. For i >= 1 and a >= 1 both sides vanish mod p; the
    congruence is checked exactly as stated.
    """
    modulus = as_modulus(p)
    if not 0 <= a < modulus.p:
        raise ValueError(f"a must be a base-{modulus} digit, got {a}")
    _check_natural(i, "i")

    base = modulus.p
    if a == 0:
        # 0! on both sides whatever i is
        return factorial(0, cap=cap) % base == 1 % base

    block = base**i
    lhs = factorial(a * block, cap=cap) % base
    exponent = a * ((block - 1) // (base - 1))
    rhs = factorial(a, cap=cap) * pow(base, exponent, base) % base
    return lhs == rhs


def two_digit_closed_form_check(n: int, p: Modulus, cap: Cap = None) -> bool:
    """Check q a_0! = prod_{r < a_0} (a_1 p + a_0 - r) and q a_0! = a_0! (mod p).

    Applies to two-digit n = a_0 + a_1 p with a_1 >= 1.

    Raises
    ------
    ValueError
        if n does not have exactly two base-p digits
    """
    modulus = as_modulus(p)
    digits = to_digits(n, modulus)
    if len(digits) != 2:
        raise ValueError(f"{n} does not have exactly two base-{modulus} digits")

    a_0 = digits.digit(0)
    q = factorize(n, modulus, cap=cap).q
    a_0_factorial = factorial(a_0, cap=cap)
    falling = math.prod(n - r for r in range(a_0))

    closed_form = q * a_0_factorial == falling
    return closed_form and (q * a_0_factorial - a_0_factorial) % modulus.p == 0


def product_identity_check(m: int, n: int, p: Modulus, cap: Cap = None) -> bool:
    """Check q(n) q(m - n) C(m, n) = q(m) prod_i C(a_i p^i, b_i p^i) exactly.

    This is the factorization of C(m, n) obtained from the three factorials
    m!, n! and (m - n)! when no base-p digit of n exceeds the digit of m.

    Raises
    ------
    ValueError
        if some digit of n exceeds the corresponding digit of m
    """
    modulus = as_modulus(p)
    top, bottom = padded_pair(to_digits(m, modulus), to_digits(n, modulus))
    if any(b > a for a, b in zip(top, bottom)):
        raise ValueError(
            f"a digit of {n} exceeds the matching digit of {m} in base {modulus}",
        )

    q_m = factorize(m, modulus, cap=cap).q
    q_n = factorize(n, modulus, cap=cap).q
    q_diff = factorize(m - n, modulus, cap=cap).q
    blocks = math.prod(
        binom_exact(a * modulus.p**i, b * modulus.p**i, cap=cap)
        for i, (a, b) in enumerate(zip(top, bottom))
    )

    return q_n * q_diff * binom_exact(m, n, cap=cap) == q_m * blocks
