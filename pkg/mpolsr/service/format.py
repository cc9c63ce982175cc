"""
Simulation time units and human-readable formatting.

Simulation time is an integer count of nanoseconds so that event ordering
and every timestamp in a trace are exact. This module converts between
that representation and seconds, and renders durations for the terminal.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import dataclass
from enum import Enum
from typing import List

SimTime = int


class TimeUnit(int, Enum):
    """Time units with their conversion factors to simulation ticks (ns)."""

    NANOSECOND = 1
    MICROSECOND = 1_000
    MILLISECOND = 1_000_000
    SECOND = 1_000_000_000
    MINUTE = 60 * 1_000_000_000
    HOUR = 60 * 60 * 1_000_000_000


def seconds(value: float) -> SimTime:
    """Convert seconds to simulation ticks, rounded to the nearest ns."""
    return int(round(value * TimeUnit.SECOND.value))


def to_seconds(ticks: SimTime) -> float:
    """Convert simulation ticks to seconds."""
    return ticks / TimeUnit.SECOND.value


def format_sim_time(ticks: SimTime) -> str:
    """
    Render a timestamp as fixed-point seconds with nanosecond digits.

    Used for trace records, so it must be byte-stable.
    """
    whole, frac = divmod(ticks, TimeUnit.SECOND.value)
    return f"{whole}.{frac:09d}"


@dataclass()
class Duration:
    """Represents a duration with a specific time unit."""

    value: int
    unit: TimeUnit

    def to_ticks(self) -> int:
        """Convert the duration to simulation ticks."""
        return self.value * self.unit.value


def convert_to_units(ticks: int) -> List[Duration]:
    """
    Split a duration in ticks into hours, minutes, seconds, ms and µs.

    Args:
        ticks: Duration in nanoseconds

    Returns:
        List of Duration objects, largest unit first
    """
    if not ticks:
        return [Duration(0, TimeUnit.MILLISECOND)]
    units = [
        TimeUnit.HOUR,
        TimeUnit.MINUTE,
        TimeUnit.SECOND,
        TimeUnit.MILLISECOND,
        TimeUnit.MICROSECOND,
    ]
    results = []
    remaining = abs(int(ticks))

    for unit in units:
        value = remaining // unit.value
        remaining %= unit.value
        if value > 0:
            results.append(Duration(value, unit))

    return results if results else [Duration(0, TimeUnit.MICROSECOND)]


def format_unit(duration: Duration) -> str:
    """
    Format a single Duration object to string.

    Args:
        duration: Duration object to format

    Returns:
        Formatted string for the duration
    """
    short_names = {TimeUnit.MILLISECOND: "ms", TimeUnit.MICROSECOND: "µs"}
    if duration.unit in short_names:
        return f"{duration.value} {short_names[duration.unit]}"
    unit_name = duration.unit.name.lower()
    return f"{duration.value} {unit_name}{'s' if duration.value != 1 else ''}"


def format_duration(value: float, source_unit: TimeUnit = TimeUnit.SECOND) -> str:
    """
    Format a duration to a human-readable string.

    Args:
        value: Duration value
        source_unit: Source time unit (default: seconds)

    Returns:
        Formatted string such as "1 second, 234 ms, 500 µs"
    """
    ticks = int(round(value * source_unit.value))
    prefix = "-" if ticks < 0 else ""
    return prefix + ", ".join(format_unit(d) for d in convert_to_units(ticks))
