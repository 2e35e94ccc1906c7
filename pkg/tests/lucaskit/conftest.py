import pytest

from loguru import logger

from lucaskit.config import load_settings

SETTINGS_VARIABLES = [
    "LUCASKIT_FACTORIAL_CAP",
    "LUCASKIT_DEGREE_CAP",
    "LUCASKIT_TABLE_CAP",
    "LUCASKIT_LOG_LEVEL",
]


@pytest.fixture(autouse=True)
def default_settings(monkeypatch):
    """Run every test against the built-in defaults, not the caller's shell."""
    for variable in SETTINGS_VARIABLES:
        monkeypatch.delenv(variable, raising=False)
    load_settings.cache_clear()
    yield
    load_settings.cache_clear()
    # the CLI installs sinks bound to the (captured) stderr of the current test
    logger.remove()
