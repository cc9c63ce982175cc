"""
Random waypoint mobility and the unit-disk radio range test.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import math
import random
from dataclasses import dataclass
from typing import Tuple

from mpolsr.service.format import SimTime, to_seconds

Position = Tuple[float, float]


@dataclass(frozen=True)
class MobilityParams:
    width: float
    height: float
    v_min: float
    v_max: float
    pause: SimTime
    tick: SimTime


@dataclass
class MobileState:
    """Where a node is, where it is going, and how fast."""

    position: Position
    waypoint: Position
    speed: float = 0.0
    pause_until: SimTime = 0
    moving: bool = False


def in_range(a: Position, b: Position, range_m: float) -> bool:
    """Unit-disk link test, inclusive at exactly range_m."""
    return math.hypot(a[0] - b[0], a[1] - b[1]) <= range_m


def mobility_step(
    node: MobileState, now: SimTime, rng: random.Random, params: MobilityParams
) -> MobileState:
    """
    Advance a node by one mobility tick.

    A paused node whose pause is over draws a waypoint uniformly in the
    area and a speed uniformly in [v_min, v_max]; a moving node advances
    speed x tick along its segment and pauses on arrival.
    """
    if params.v_max <= 0:
        return node
    if not node.moving:
        if now < node.pause_until:
            return node
        node.waypoint = (rng.uniform(0, params.width), rng.uniform(0, params.height))
        node.speed = rng.uniform(params.v_min, params.v_max)
        node.moving = node.speed > 0
        if not node.moving:
            node.pause_until = now + params.pause
        return node

    x, y = node.position
    wx, wy = node.waypoint
    remaining = math.hypot(wx - x, wy - y)
    travel = node.speed * to_seconds(params.tick)
    if travel >= remaining:
        node.position = node.waypoint
        node.moving = False
        node.pause_until = now + params.pause
    else:
        node.position = (
            x + (wx - x) * travel / remaining,
            y + (wy - y) * travel / remaining,
        )
    return node
