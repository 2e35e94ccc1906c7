"""Binomial coefficients modulo a prime, with an executable proof of Lucas' theorem."""

try:
    from ._version import version as __version__
except ImportError:  # pragma: no cover - unbuilt checkout
    __version__ = "0+unknown"

from loguru import logger

from .exact_oracle import binom_exact, factorial, pascal_table_mod_p
from .lucas import lucas_binom, lucas_binom_str, single_digit_binom
from .radix import (
    DigitExpansion,
    PrimeModulus,
    Residue,
    from_digits,
    padded_pair,
    to_digits,
)

# silent until an application calls set_up_logger
logger.disable("lucaskit")

__all__ = [
    "DigitExpansion",
    "PrimeModulus",
    "Residue",
    "binom_exact",
    "factorial",
    "from_digits",
    "lucas_binom",
    "lucas_binom_str",
    "padded_pair",
    "pascal_table_mod_p",
    "single_digit_binom",
    "to_digits",
]
