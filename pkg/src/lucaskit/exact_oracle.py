"""Exact reference computations used as ground truth.

Nothing here shares code with the Lucas fast path: binomials come from the
multiplicative formula over exact integers, and the Pascal table mod p is built
with additions only.
"""
import functools
import math
import typing

import numpy as np
from loguru import logger

from .config import resolve_cap
from .exceptions import CapExceededError
from .radix import PrimeModulus, Residue, _check_natural, as_modulus

__all__ = [
    "ExactNat",
    "PascalTable",
    "binom_exact",
    "binom_row_exact",
    "factorial",
    "pascal_table_mod_p",
]

ExactNat = int


@functools.lru_cache(maxsize=4096)
def _factorial(n: int) -> int:
    return math.factorial(n)


def factorial(n: int, cap: typing.Optional[int] = None) -> ExactNat:
    """Compute n! exactly.

    Parameters
    ----------
    n : int
        natural number
    cap : int, optional
        largest admissible n, by default the configured ``factorial_cap``

    Returns
    -------
    int

    Raises
    ------
    CapExceededError
        if n is above the cap; callers must not take the exact path at this scale
    """
    _check_natural(n)
    cap = resolve_cap(cap, "factorial_cap")
    if n > cap:
        raise CapExceededError("factorial argument", n, cap)
    return _factorial(n)


def binom_exact(m: int, n: int, cap: typing.Optional[int] = None) -> ExactNat:
    """Compute C(m, n) exactly with the multiplicative formula.

    Each partial product ``C(m, j)`` is an integer, so every step divides
    exactly; no factorials are formed.

    Parameters
    ----------
    m, n : int
        natural numbers; C(m, n) = 0 when n > m
    cap : int, optional
        largest admissible m, by default the configured ``factorial_cap``

    Raises
    ------
    CapExceededError
        if m is above the cap
    """
    _check_natural(m, "m")
    _check_natural(n, "n")
    if n > m:
        return 0
    cap = resolve_cap(cap, "factorial_cap")
    if m > cap:
        raise CapExceededError("binomial top argument", m, cap)

    n = min(n, m - n)
    result = 1
    for j in range(n):
        result = result * (m - j) // (j + 1)
    return result


def binom_row_exact(m: int, cap: typing.Optional[int] = None) -> typing.Tuple[int, ...]:
    """Return the row C(m, 0), ..., C(m, m) by the multiplicative recurrence."""
    _check_natural(m, "m")
    cap = resolve_cap(cap, "factorial_cap")
    if m > cap:
        raise CapExceededError("binomial top argument", m, cap)

    row = [1]
    for j in range(m):
        row.append(row[-1] * (m - j) // (j + 1))
    return tuple(row)


class PascalTable:
    """Read-only rows of Pascal's triangle reduced mod p.

    Row ``r`` is a numpy array of length r + 1. Rows use the smallest unsigned
    dtype that can hold the sum of two residues.
    """

    def __init__(self, rows: typing.Sequence[np.ndarray], modulus: PrimeModulus):
        self._rows = tuple(rows)
        self.modulus = modulus

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self):
        return iter(self._rows)

    def row(self, r: int) -> np.ndarray:
        """Return row r (C(r, 0..r) mod p)."""
        return self._rows[r]

    def entry(self, r: int, c: int):
        """Return C(r, c) mod p as a Residue; entries outside the triangle are 0."""
        if c < 0 or c > r:
            return Residue(0, self.modulus)
        return Residue(int(self._rows[r][c]), self.modulus)


def pascal_table_mod_p(
    rows: int,
    p: typing.Union[int, PrimeModulus],
    cap: typing.Optional[int] = None,
) -> PascalTable:
    """Build the first ``rows`` rows of Pascal's triangle mod p with additions only.

    Parameters
    ----------
    rows : int
        number of rows; row indices run from 0 to rows - 1
    p : int or PrimeModulus
        the prime
    cap : int, optional
        largest admissible number of rows, by default the configured ``table_cap``

    Returns
    -------
    PascalTable

    Example
    -------
    >>> pascal_table_mod_p(3, 2).row(2).tolist()
    [1, 0, 1]
    """
    modulus = as_modulus(p)
    _check_natural(rows, "rows")
    cap = resolve_cap(cap, "table_cap")
    if rows > cap:
        raise CapExceededError("Pascal table rows", rows, cap)

    dtype = np.min_scalar_type(2 * (modulus.p - 1))
    if dtype.kind != "u":
        dtype = np.dtype(object)
    p_scalar = modulus.p if dtype.kind == "O" else dtype.type(modulus.p)
    logger.debug(f"Building {rows} rows of Pascal's triangle mod {modulus} as {dtype}")

    table = []
    previous = None
    for r in range(rows):
        if previous is None:
            current = np.ones(1, dtype=dtype)
        else:
            current = np.zeros(r + 1, dtype=dtype)
            current[1:] += previous
            current[:-1] += previous
            current %= p_scalar
        current.setflags(write=False)
        table.append(current)
        previous = current

    return PascalTable(table, modulus)
