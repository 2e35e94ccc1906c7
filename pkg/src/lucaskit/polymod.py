"""Dense polynomials over Z/pZ in one indeterminate x.

Enough arithmetic to check coefficient-wise congruence of polynomials and the
expansions of (1 + x)^(a p^i) that turn C(a p^i, b p^i) into C(a, b) mod p.
"""
import functools
import typing

import numpy as np
import pandas as pd
from loguru import logger

from .config import resolve_cap
from .exact_oracle import binom_exact
from .exceptions import CapExceededError
from .radix import (
    PrimeModulus,
    Residue,
    _check_natural,
    _check_same_modulus,
    as_modulus,
)

__all__ = [
    "PolyModP",
    "coeff_extract_check",
    "congruence_witness",
    "congruent_coeffwise",
    "freshman_check",
    "interior_vanishing_check",
    "interior_vanishing_profile",
    "poly_mul",
    "poly_pow",
]

Modulus = typing.Union[int, PrimeModulus]

_INT64_LIMIT = 2**63 - 1


def _coefficient_dtype(p: int, length: int) -> np.dtype:
    """int64 when a convolution of this length cannot overflow, object otherwise."""
    if length * (p - 1) ** 2 <= _INT64_LIMIT:
        return np.dtype(np.int64)
    return np.dtype(object)


def _trim(coeffs: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(coeffs)
    if nonzero.size == 0:
        return coeffs[:0]
    return coeffs[: nonzero[-1] + 1]


class PolyModP:
    """A polynomial with coefficients in Z/pZ, kept in canonical form.

    ``coeffs[k]`` is the coefficient of x**k; trailing zeros are stripped, so
    the zero polynomial has no coefficients. Instances are immutable.
    """

    __slots__ = ("_coeffs", "modulus")

    def __init__(self, coeffs: np.ndarray, modulus: PrimeModulus):
        coeffs = _trim(np.asarray(coeffs))
        coeffs.setflags(write=False)
        self._coeffs = coeffs
        self.modulus = modulus

    @classmethod
    def from_coefficients(
        cls,
        values: typing.Iterable[int],
        p: Modulus,
    ) -> "PolyModP":
        """Reduce integer coefficients (lowest power first) mod p."""
        modulus = as_modulus(p)
        values = [int(v) % modulus.p for v in values]
        dtype = _coefficient_dtype(modulus.p, 1)
        return cls(np.array(values, dtype=dtype), modulus)

    @classmethod
    def zero(cls, p: Modulus) -> "PolyModP":
        return cls.from_coefficients([], p)

    @classmethod
    def one(cls, p: Modulus) -> "PolyModP":
        return cls.from_coefficients([1], p)

    @classmethod
    def monomial(cls, degree: int, p: Modulus, coefficient: int = 1) -> "PolyModP":
        """coefficient * x**degree."""
        _check_natural(degree, "degree")
        return cls.from_coefficients([0] * degree + [coefficient], p)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree of the polynomial, -1 for zero."""
        return len(self._coeffs) - 1

    @property
    def residues(self) -> typing.Tuple[Residue, ...]:
        return tuple(Residue(int(c), self.modulus) for c in self._coeffs)

    def coefficient(self, k: int) -> Residue:
        """Coefficient of x**k (zero above the degree)."""
        value = int(self._coeffs[k]) if 0 <= k <= self.degree else 0
        return Residue(value, self.modulus)

    def __add__(self, other: "PolyModP") -> "PolyModP":
        modulus = _check_same_modulus(self.modulus, other.modulus)
        length = max(len(self._coeffs), len(other._coeffs))
        total = np.zeros(length, dtype=object)
        total[: len(self._coeffs)] += self._coeffs
        total[: len(other._coeffs)] += other._coeffs
        return PolyModP.from_coefficients(total, modulus)

    def __mul__(self, other: "PolyModP") -> "PolyModP":
        return poly_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyModP):
            return NotImplemented
        if self.modulus != other.modulus:
            return False
        return congruent_coeffwise(self, other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"PolyModP({[int(c) for c in self._coeffs]}, p={self.modulus})"


def poly_mul(f: PolyModP, g: PolyModP) -> PolyModP:
    """Multiply two polynomials, reducing the convolution mod p.

    Raises
    ------
    ModulusMismatchError
        if f and g live over different primes
    """
    modulus = _check_same_modulus(f.modulus, g.modulus)
    if f.degree < 0 or g.degree < 0:
        return PolyModP.zero(modulus)

    dtype = _coefficient_dtype(modulus.p, min(len(f.coeffs), len(g.coeffs)))
    product = np.convolve(f.coeffs.astype(dtype), g.coeffs.astype(dtype))
    product %= modulus.p
    return PolyModP(product, modulus)


def poly_pow(f: PolyModP, e: int, degree_cap: typing.Optional[int] = None) -> PolyModP:
    """Raise f to the power e by binary exponentiation, reducing at every multiply.

    Parameters
    ----------
    f : PolyModP
    e : int
        natural exponent; f**0 is 1
    degree_cap : int, optional
        largest admissible degree of the result, by default the configured one

    Raises
    ------
    CapExceededError
        if e * deg(f) is above the degree cap
    """
    _check_natural(e, "e")
    cap = resolve_cap(degree_cap, "degree_cap")
    if f.degree > 0 and e * f.degree > cap:
        raise CapExceededError("polynomial degree", e * f.degree, cap)

    result = PolyModP.one(f.modulus)
    base = f
    while e:
        if e & 1:
            result = poly_mul(result, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return result


def congruent_coeffwise(f: PolyModP, g: PolyModP) -> bool:
    """Whether f and g agree coefficient by coefficient mod p.

    Over Z/pZ this is equality of canonical forms, which covers both
    directions: congruent polynomials have congruent coefficients and
    conversely.

    Raises
    ------
    ModulusMismatchError
        if f and g live over different primes
    """
    _check_same_modulus(f.modulus, g.modulus)
    return bool(np.array_equal(f.coeffs, g.coeffs))


def congruence_witness(
    a: typing.Sequence[int],
    b: typing.Sequence[int],
    p: Modulus,
) -> typing.Optional[typing.List[int]]:
    """Find k(X) with A(X) = B(X) + p k(X) for integer polynomials A and B.

    Parameters
    ----------
    a, b : sequences of int
        integer coefficients, lowest power first
    p : int or PrimeModulus

    Returns
    -------
    list of int or None
        the integer coefficients of k(X), or None if A and B are not congruent mod p
    """
    modulus = as_modulus(p)
    length = max(len(a), len(b))
    a = list(a) + [0] * (length - len(a))
    b = list(b) + [0] * (length - len(b))

    witness = []
    for a_i, b_i in zip(a, b):
        k_i, remainder = divmod(a_i - b_i, modulus.p)
        if remainder:
            return None
        witness.append(k_i)
    return witness


def _one_plus_x(p: PrimeModulus) -> PolyModP:
    return PolyModP.from_coefficients([1, 1], p)


@functools.lru_cache(maxsize=128)
def _binomial_expansion(exponent: int, p: PrimeModulus, degree_cap: int) -> PolyModP:
    """(1 + x)**exponent mod p, shared by the checks that revisit one exponent."""
    return poly_pow(_one_plus_x(p), exponent, degree_cap=degree_cap)


def freshman_check(
    i: int,
    a: int,
    p: Modulus,
    degree_cap: typing.Optional[int] = None,
) -> bool:
    """Check (1 + x)^(a p^i) = (1 + x^(p^i))^a coefficient-wise mod p."""
    modulus = as_modulus(p)
    _check_natural(i, "i")
    _check_natural(a, "a")
    cap = resolve_cap(degree_cap, "degree_cap")
    block = modulus.p**i

    lhs = _binomial_expansion(a * block, modulus, cap)
    sparse = PolyModP.one(modulus) + PolyModP.monomial(block, modulus)
    rhs = poly_pow(sparse, a, degree_cap=cap)
    return congruent_coeffwise(lhs, rhs)


def coeff_extract_check(
    a: int,
    b: int,
    i: int,
    p: Modulus,
    degree_cap: typing.Optional[int] = None,
) -> bool:
    """Check that x^(b p^i) has coefficient C(a, b) mod p in (1 + x)^(a p^i).

    Raises
    ------
    ValueError
        if a is not a base-p digit or b is not in [0, a]
    """
    modulus = as_modulus(p)
    if not 0 <= a < modulus.p:
        raise ValueError(f"a must be a base-{modulus} digit, got {a}")
    if not 0 <= b <= a:
        raise ValueError(f"b must lie in [0, {a}], got {b}")
    _check_natural(i, "i")
    cap = resolve_cap(degree_cap, "degree_cap")
    block = modulus.p**i

    expansion = _binomial_expansion(a * block, modulus, cap)
    expected = binom_exact(a, b) % modulus.p
    return expansion.coefficient(b * block).value == expected


def interior_vanishing_check(
    a: int,
    i: int,
    p: Modulus,
    degree_cap: typing.Optional[int] = None,
) -> bool:
    """Check that all coefficients of (1 + x)^(a p^i) strictly inside vanish mod p."""
    modulus = as_modulus(p)
    _check_natural(a, "a")
    _check_natural(i, "i")
    cap = resolve_cap(degree_cap, "degree_cap")

    expansion = _binomial_expansion(a * modulus.p**i, modulus, cap)
    interior = expansion.coeffs[1:-1]
    return not np.any(interior)


def interior_vanishing_profile(
    primes: typing.Iterable[Modulus],
    max_block: int = 2**12,
    degree_cap: typing.Optional[int] = None,
) -> pd.DataFrame:
    """Tabulate for which digits a the coefficients of (1 + x)^(a p^i) vanish inside.

    The vanishing of every interior coefficient only holds for a = 1; for
    1 < a < p the expansion is (1 + x^(p^i))^a and keeps the terms C(a, b) x^(b p^i).

    Parameters
    ----------
    primes : iterable of int or PrimeModulus
    max_block : int, optional
        largest p**i considered, by default 2**12
    degree_cap : int, optional
        exponents a p**i above this are skipped, by default the configured cap

    Returns
    -------
    pd.DataFrame
        columns p, i, a, exponent, holds
    """
    cap = resolve_cap(degree_cap, "degree_cap")
    records = []
    for p in primes:
        modulus = as_modulus(p)
        i = 0
        while modulus.p**i <= max_block:
            block = modulus.p**i
            for a in range(1, modulus.p):
                if a * block > cap:
                    break
                records.append(
                    {
                        "p": modulus.p,
                        "i": i,
                        "a": a,
                        "exponent": a * block,
                        "holds": interior_vanishing_check(a, i, modulus, cap),
                    },
                )
            i += 1

    profile = pd.DataFrame.from_records(
        records,
        columns=["p", "i", "a", "exponent", "holds"],
    )
    logger.debug(
        f"Interior vanishing holds in {int(profile['holds'].sum())} "
        f"of {len(profile)} cases",
    )
    return profile
