"""
Unit tests for the EventDispatcher class and event ordering.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import heapq
import unittest
from unittest.mock import Mock

from mpolsr.errors import SimulationError
from mpolsr.sim.dispatch import Event, EventDispatcher, EventKind


class TestEventDispatcher(unittest.TestCase):
    """Test cases for the EventDispatcher class."""

    def setUp(self):
        """Set up test fixtures."""
        self.dispatcher = EventDispatcher()
        self.on_hello = Mock()
        self.dispatcher.register_handler(EventKind.HELLO_DUE, self.on_hello)

    def test_register_handler(self):
        handler = Mock()
        self.dispatcher.register_handler(EventKind.TC_DUE, handler)
        self.assertIs(self.dispatcher.handlers[EventKind.TC_DUE], handler)

    def test_register_handlers(self):
        first, second = Mock(), Mock()
        self.dispatcher.register_handlers(
            {EventKind.CBR_SEND: first, EventKind.SIM_END: second}
        )
        self.assertIs(self.dispatcher.handlers[EventKind.CBR_SEND], first)
        self.assertIs(self.dispatcher.handlers[EventKind.SIM_END], second)

    def test_dispatch_calls_handler(self):
        event = Event(5, 0, EventKind.HELLO_DUE, node=3)
        self.dispatcher.dispatch(event)
        self.on_hello.assert_called_once_with(event)

    def test_dispatch_without_handler(self):
        """An unregistered kind is an internal error."""
        with self.assertRaises(SimulationError) as ctx:
            self.dispatcher.dispatch(Event(0, 0, EventKind.MOBILITY_UPDATE))
        self.assertIn("mobility_update", str(ctx.exception))


class TestEventOrder(unittest.TestCase):
    def test_time_then_ordinal(self):
        """Events pop by time, and by scheduling order at equal times."""
        heap = []
        for event in [
            Event(10, 2, EventKind.TC_DUE),
            Event(5, 3, EventKind.HELLO_DUE),
            Event(10, 1, EventKind.CBR_SEND),
        ]:
            heapq.heappush(heap, event)
        order = [heapq.heappop(heap).kind for _ in range(3)]
        self.assertEqual(order, [EventKind.HELLO_DUE, EventKind.CBR_SEND, EventKind.TC_DUE])


if __name__ == "__main__":
    unittest.main()
