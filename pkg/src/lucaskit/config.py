"""Runtime configuration read from ``LUCASKIT_*`` environment variables."""
import functools
from dataclasses import dataclass

import environs
from loguru import logger

from .exceptions import ConfigurationError
from .utils.logging.loguru import log_levels

ENV_PREFIX = "LUCASKIT_"

DEFAULT_FACTORIAL_CAP = 100_000
DEFAULT_DEGREE_CAP = 2**16
DEFAULT_TABLE_CAP = 10_000
DEFAULT_LOG_LEVEL = "WARNING"


@dataclass(frozen=True)
class Settings:
    """Caps and defaults shared by the exact and polynomial code paths.

    Parameters
    ----------
    factorial_cap : int
        largest n for which the exact oracle computes n! (and C(m, n) with m <= cap)
    degree_cap : int
        largest polynomial degree poly_pow may produce
    table_cap : int
        largest number of rows of a Pascal table mod p
    log_level : str
        default loguru level for the command line
    """

    factorial_cap: int = DEFAULT_FACTORIAL_CAP
    degree_cap: int = DEFAULT_DEGREE_CAP
    table_cap: int = DEFAULT_TABLE_CAP
    log_level: str = DEFAULT_LOG_LEVEL


def _positive(value: int) -> bool:
    return value > 0


@functools.lru_cache(maxsize=None)
def load_settings() -> Settings:
    """Read the settings from the environment (and a ``.env`` file, if present).

    The result is cached; call ``load_settings.cache_clear()`` after changing the
    environment.

    Returns
    -------
    Settings

    Raises
    ------
    ConfigurationError
        if a variable is set to an invalid value
    """
    env = environs.Env()
    env.read_env()

    try:
        with env.prefixed(ENV_PREFIX):
            settings = Settings(
                factorial_cap=env.int(
                    "FACTORIAL_CAP",
                    DEFAULT_FACTORIAL_CAP,
                    validate=_positive,
                ),
                degree_cap=env.int(
                    "DEGREE_CAP",
                    DEFAULT_DEGREE_CAP,
                    validate=_positive,
                ),
                table_cap=env.int(
                    "TABLE_CAP",
                    DEFAULT_TABLE_CAP,
                    validate=_positive,
                ),
                log_level=env.str(
                    "LOG_LEVEL",
                    DEFAULT_LOG_LEVEL,
                    validate=lambda level: level.upper() in log_levels,
                ).upper(),
            )
    except environs.EnvError as error:
        raise ConfigurationError("Invalid LUCASKIT_* settings", str(error)) from error

    logger.debug(f"Loaded settings from the environment: {settings}")

    return settings


def resolve_cap(cap, field: str) -> int:
    """Return ``cap``, or the configured value of ``field`` when cap is None."""
    if cap is None:
        return getattr(load_settings(), field)
    if cap < 0:
        raise ValueError(f"{field} must be non-negative, got {cap}")
    return cap
