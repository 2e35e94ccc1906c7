"""Utility functions for formatting."""
import math

_DURATION_UNITS = [(1.0, "s"), (1e-3, "ms"), (1e-6, "µs"), (1e-9, "ns")]


def format_duration(seconds: float, decimals: int = 3) -> str:
    """Format a wall time with the largest SI unit that keeps it at or above 1.

    Parameters
    ----------
    seconds : float
        duration in seconds
    decimals : int
        Number of decimals

    Returns
    -------
    str
        formatted duration, e.g. "1.250ms"
    """
    seconds = float(seconds)
    if seconds == 0 or not math.isfinite(seconds):
        return ("{val:." + str(decimals) + "f}s").format(val=seconds)

    for scale, unit in _DURATION_UNITS:
        if abs(seconds) >= scale:
            break

    return ("{val:." + str(decimals) + "f}{unit}").format(
        val=seconds / scale,
        unit=unit,
    )
