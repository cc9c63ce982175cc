"""
Line-oriented event trace.

Each record is `<time> <node> <kind> [key=value ...]` where time is
fixed-point seconds and node is `-` for network-wide events.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Optional, TextIO

from mpolsr.service.format import SimTime, TimeUnit, format_sim_time


@dataclass(frozen=True)
class TraceRecord:
    time: SimTime
    node: Optional[int]
    kind: str
    detail: Dict[str, str] = field(default_factory=dict)


def format_record(time: SimTime, node: Optional[int], kind: str, **detail) -> str:
    parts = [format_sim_time(time), "-" if node is None else str(node), kind]
    parts.extend(f"{key}={value}" for key, value in detail.items())
    return " ".join(parts)


def parse_record(line: str) -> TraceRecord:
    """Inverse of format_record."""
    tokens = line.split()
    if len(tokens) < 3:
        raise ValueError(f"malformed trace record: {line!r}")
    whole, frac = tokens[0].split(".")
    time = int(whole) * TimeUnit.SECOND.value + int(frac)
    node = None if tokens[1] == "-" else int(tokens[1])
    detail = dict(token.split("=", 1) for token in tokens[3:])
    return TraceRecord(time, node, tokens[2], detail)


def read_trace(lines: Iterable[str]) -> Iterator[TraceRecord]:
    for line in lines:
        if line.strip():
            yield parse_record(line)


class TraceWriter:
    """Writes records to a text sink; does nothing without one."""

    def __init__(self, sink: Optional[TextIO] = None):
        self.sink = sink

    @property
    def enabled(self) -> bool:
        return self.sink is not None

    def record(self, time: SimTime, node: Optional[int], kind: str, **detail) -> None:
        if self.sink is not None:
            self.sink.write(format_record(time, node, kind, **detail) + "\n")

