"""
mpolsr package initialization.
Re-exports the entry points most callers need: route computation, the
simulator and the metrics.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from mpolsr.config.scenario import Scenario, Variant, load_scenario, parse_scenario
from mpolsr.routing.graph import CostPolicy, Path, TopologyGraph, multipath_dijkstra
from mpolsr.service.metrics import (
    MetricsReport,
    average_delay,
    cov_load,
    delivery_ratio,
    routing_load,
)
from mpolsr.sim.engine import run
from mpolsr.version import (
    __version__,
    __title__,
    __description__,
    __author__,
    __license__,
)


__all__ = [
    "CostPolicy",
    "MetricsReport",
    "Path",
    "Scenario",
    "TopologyGraph",
    "Variant",
    "average_delay",
    "cov_load",
    "delivery_ratio",
    "load_scenario",
    "multipath_dijkstra",
    "parse_scenario",
    "routing_load",
    "run",
]
