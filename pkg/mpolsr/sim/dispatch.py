"""
Event dispatch for the simulator.

This module contains the EventDispatcher class, which maps each event kind
to the handler registered for it, and the Event record itself.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional

from mpolsr.config.const import Constant
from mpolsr.errors import SimulationError
from mpolsr.service.format import SimTime


class EventKind(str, Enum):
    HELLO_DUE = "hello_due"
    TC_DUE = "tc_due"
    CBR_SEND = "cbr_send"
    MAC_DEQUEUE = "mac_dequeue"
    PACKET_ARRIVAL = "packet_arrival"
    EXPIRY_SWEEP = "expiry_sweep"
    MOBILITY_UPDATE = "mobility_update"
    GROUP_FLUSH = "group_flush"
    SIM_END = "sim_end"


@dataclass(order=True)
class Event:
    """Ordered by (time, ordinal); the ordinal is the scheduling count."""

    time: SimTime
    ordinal: int
    kind: EventKind = field(compare=False)
    node: Optional[int] = field(default=None, compare=False)
    payload: Any = field(default=None, compare=False)


Handler = Callable[[Event], None]


class EventDispatcher:
    """
    EventDispatcher routes events to handlers registered per kind.
    It keeps the engine's main loop independent of what each event does.
    """

    def __init__(self):
        self.handlers: Dict[EventKind, Handler] = {}

    def register_handler(self, kind: EventKind, handler: Handler) -> None:
        """
        Register the handler for one event kind.

        Args:
            kind: The event kind.
            handler: Callable receiving the event.
        """
        self.handlers[kind] = handler

    def register_handlers(self, handlers: Dict[EventKind, Handler]) -> None:
        """
        Register several handlers at once.

        Args:
            handlers: A dictionary mapping event kinds to handlers.
        """
        self.handlers.update(handlers)

    def dispatch(self, event: Event) -> None:
        """
        Run the handler registered for the event's kind.

        Raises:
            SimulationError: no handler is registered for the kind.
        """
        handler = self.handlers.get(event.kind)
        if handler is None:
            raise SimulationError(Constant.error_no_handler.format(kind=event.kind.value))
        handler(event)
