"""
Exceptions raised by the mpolsr package.

Every error derives from MpOlsrError so callers (the CLI in particular)
can catch the whole family at once. Packet losses inside the simulator are
outcomes, not exceptions.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from typing import List, Optional, Tuple


class MpOlsrError(Exception):
    """Base class for all mpolsr errors."""


class UnknownSource(MpOlsrError):
    """The route computation was asked to start from a node not in the graph."""


class NoRoute(MpOlsrError):
    """The destination cannot be reached from the source."""


class SelfMessage(MpOlsrError):
    """A node received a control message it originated itself."""


class MisroutedPacket(MpOlsrError):
    """A source-routed packet is held by a node that is not at its cursor."""


class InsufficientDescriptions(MpOlsrError):
    """Fewer than M distinct descriptions were offered to the decoder."""


class CorruptDescription(MpOlsrError):
    """Mojette inversion reached a contradiction."""


class SimulationError(MpOlsrError):
    """Internal inconsistency in the event loop."""


class NoTraffic(MpOlsrError):
    """A metric needs at least one sent data packet."""


class NothingDelivered(MpOlsrError):
    """A metric needs at least one delivered data packet."""


class ZeroMean(MpOlsrError):
    """No node forwarded any data packet, so CoV is undefined."""


class InvalidScenario(MpOlsrError):
    """A scenario failed validation; carries (field, problem) diagnostics."""

    def __init__(self, diagnostics: List[Tuple[str, str]]):
        self.diagnostics = list(diagnostics)
        details = "; ".join(f"{name}: {problem}" for name, problem in diagnostics)
        super().__init__(f"invalid scenario ({details})")


class ScenarioParseError(MpOlsrError):
    """A scenario file line could not be understood."""

    def __init__(
        self,
        message: str,
        line: int,
        key: Optional[str] = None,
        suggestion: Optional[str] = None,
    ):
        self.line = line
        self.key = key
        self.suggestion = suggestion
        text = f"line {line}: {message}"
        if suggestion:
            text += f" (did you mean '{suggestion}'?)"
        super().__init__(text)
