"""
Abstract MAC: a FIFO per node, serialization delay from frame size and
bandwidth, unit-disk reachability checked when a frame leaves the queue,
and an optional link-failure notification after the retry timeout.

Radios are half-duplex: a node that is sending or receiving cannot start
a transmission, and a unicast waits until its receiver is idle as well.
Nothing collides; contention only shows up as waiting.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Deque, Mapping, Optional, Tuple, Union

from mpolsr.routing.graph import NodeId
from mpolsr.service.format import SimTime, TimeUnit
from mpolsr.sim.mobility import Position, in_range

BROADCAST: NodeId = -1


@dataclass(frozen=True)
class MacParams:
    bandwidth_bps: float
    overhead_bytes: int
    retry_limit: int
    tx_range_m: float
    feedback: bool
    retry_interval: SimTime = 0


@dataclass
class Frame:
    """A control message or data packet handed to the MAC."""

    payload: Any
    size_bytes: int
    sender: NodeId
    receiver: NodeId = BROADCAST

    @property
    def broadcast(self) -> bool:
        return self.receiver == BROADCAST


@dataclass(frozen=True)
class Delivered:
    receivers: Tuple[NodeId, ...]
    delivered_at: SimTime
    busy_until: SimTime


@dataclass(frozen=True)
class Failed:
    feedback_emitted: bool
    busy_until: SimTime


MacOutcome = Union[Delivered, Failed]


@dataclass
class MacQueue:
    """Per-node transmit FIFO."""

    frames: Deque[Frame] = field(default_factory=deque)
    busy: bool = False
    last_dequeue: Optional[SimTime] = None

    def __len__(self) -> int:
        return len(self.frames)


def service_time(size_bytes: int, params: MacParams) -> SimTime:
    """Time to put one frame (payload plus MAC overhead) on the air."""
    bits = (size_bytes + params.overhead_bytes) * 8
    return max(1, math.ceil(bits * TimeUnit.SECOND.value / params.bandwidth_bps))


def retry_timeout(size_bytes: int, params: MacParams) -> SimTime:
    """How long a unicast occupies the sender before it is given up."""
    return params.retry_limit * (service_time(size_bytes, params) + params.retry_interval)


def transmit_ready_at(
    frame: Frame,
    positions: Mapping[NodeId, Position],
    radio_busy: Mapping[NodeId, SimTime],
    now: SimTime,
    params: MacParams,
) -> SimTime:
    """
    Earliest time the head frame can go on the air.

    The sender must be idle. A unicast also waits for a receiver in range
    to finish what it is sending or receiving; a receiver out of range
    cannot be sensed, so the frame goes out and the retries find out.
    """
    ready = max(now, radio_busy.get(frame.sender, now))
    if not frame.broadcast and in_range(
        positions[frame.sender], positions[frame.receiver], params.tx_range_m
    ):
        ready = max(ready, radio_busy.get(frame.receiver, now))
    return ready


def mac_transmit(
    frame: Frame,
    positions: Mapping[NodeId, Position],
    now: SimTime,
    params: MacParams,
) -> MacOutcome:
    """
    Send the frame at the head of the sender's queue.

    Broadcasts reach every node in range at this instant and never fail.
    A unicast to a node out of range keeps the MAC busy for the whole
    retry budget and then fails; feedback is emitted when enabled.
    """
    airtime = service_time(frame.size_bytes, params)
    origin = positions[frame.sender]
    if frame.broadcast:
        receivers = tuple(
            node
            for node in sorted(positions)
            if node != frame.sender and in_range(origin, positions[node], params.tx_range_m)
        )
        return Delivered(receivers, now + airtime, now + airtime)
    if in_range(origin, positions[frame.receiver], params.tx_range_m):
        return Delivered((frame.receiver,), now + airtime, now + airtime)
    return Failed(params.feedback, now + retry_timeout(frame.size_bytes, params))
