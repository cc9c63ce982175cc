"""
Run metrics: delivery ratio, routing load, average end-to-end delay and
the coefficient of variation of per-node forwarding load.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import numpy as np

from mpolsr.config.const import Constant
from mpolsr.errors import MpOlsrError, NothingDelivered, NoTraffic, ZeroMean
from mpolsr.service.format import to_seconds
from mpolsr.sim.trace import read_trace


@dataclass
class MetricsReport:
    """
    Counters collected over one run.

    `per_packet_delay` holds seconds for each delivered original packet,
    `per_node_forwarded` covers every node (zeros included) and counts
    data frames a node relayed for someone else. `description_drops`
    tracks MDC descriptions lost on the way; `drop_reasons` is about
    original packets only, so data_sent = data_delivered + sum(drops).
    """

    node_count: int = 0
    data_sent: int = 0
    data_delivered: int = 0
    control_transmissions: int = 0
    per_packet_delay: List[float] = field(default_factory=list)
    per_node_forwarded: Dict[int, int] = field(default_factory=dict)
    drop_reasons: Dict[str, int] = field(default_factory=dict)
    description_drops: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for node in range(self.node_count):
            self.per_node_forwarded.setdefault(node, 0)

    def record_drop(self, reason: str) -> None:
        self.drop_reasons[reason] = self.drop_reasons.get(reason, 0) + 1

    def record_description_drop(self, reason: str) -> None:
        self.description_drops[reason] = self.description_drops.get(reason, 0) + 1

    @property
    def data_dropped(self) -> int:
        return sum(self.drop_reasons.values())

    def to_dict(self) -> Dict[str, object]:
        return {
            "data_sent": self.data_sent,
            "data_delivered": self.data_delivered,
            "control_transmissions": self.control_transmissions,
            "delivery_ratio": _or_none(delivery_ratio, self),
            "routing_load": _or_none(routing_load, self),
            "average_delay_s": _or_none(average_delay, self),
            "cov_load": _or_none(cov_load, self),
            "drop_reasons": dict(sorted(self.drop_reasons.items())),
            "description_drops": dict(sorted(self.description_drops.items())),
            "per_node_forwarded": {str(n): c for n, c in sorted(self.per_node_forwarded.items())},
        }

    def csv_row(self, variant: str, max_speed: float, seed: int) -> List[str]:
        """Row in Constant.csv_columns order; undefined metrics are left empty."""
        delay = _or_none(average_delay, self)
        values = {
            "variant": variant,
            "max_speed_mps": _number(max_speed),
            "seed": str(seed),
            "data_sent": str(self.data_sent),
            "data_delivered": str(self.data_delivered),
            "delivery_ratio": _number(_or_none(delivery_ratio, self)),
            "routing_load": _number(_or_none(routing_load, self)),
            "avg_delay_ms": _number(None if delay is None else delay * 1000),
            "cov_load": _number(_or_none(cov_load, self)),
            "drops_no_route": str(self.drop_reasons.get("no_route", 0)),
            "drops_link": str(self.drop_reasons.get("link", 0)),
            "drops_recovery_limit": str(self.drop_reasons.get("recovery_limit", 0)),
        }
        return [values[column] for column in Constant.csv_columns]


def _or_none(metric, report: MetricsReport) -> Optional[float]:
    try:
        return metric(report)
    except MpOlsrError:
        return None


def _number(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{value:.6f}"


def delivery_ratio(report: MetricsReport) -> float:
    """
    Delivered over sent original packets.

    Raises:
        NoTraffic: nothing was sent.
    """
    if report.data_sent == 0:
        raise NoTraffic(Constant.error_no_traffic)
    return report.data_delivered / report.data_sent


def routing_load(report: MetricsReport) -> float:
    """
    Control transmissions (sent or forwarded) per delivered data packet.

    Raises:
        NothingDelivered: no data packet arrived.
    """
    if report.data_delivered == 0:
        raise NothingDelivered(Constant.error_nothing_delivered)
    return report.control_transmissions / report.data_delivered


def average_delay(report: MetricsReport) -> float:
    """
    Mean end-to-end delay in seconds.

    Raises:
        NothingDelivered: no data packet arrived.
    """
    if not report.per_packet_delay:
        raise NothingDelivered(Constant.error_nothing_delivered)
    return float(np.mean(report.per_packet_delay))


def cov_load(report: MetricsReport) -> float:
    """
    Population standard deviation of per-node forwarding counts over their
    mean, taken over every node of the run.

    Raises:
        ZeroMean: no node forwarded anything.
    """
    counts = np.array(
        [report.per_node_forwarded.get(n, 0) for n in sorted(report.per_node_forwarded)],
        dtype=float,
    )
    if counts.size == 0 or counts.mean() == 0:
        raise ZeroMean(Constant.error_zero_mean)
    return float(counts.std() / counts.mean())


def report_from_trace(lines: Iterable[str], node_count: int) -> MetricsReport:
    """Rebuild a run's MetricsReport from its event trace."""
    report = MetricsReport(node_count=node_count)
    forwarded = Counter()
    for record in read_trace(lines):
        if record.kind == "data_sent":
            report.data_sent += 1
        elif record.kind == "deliver":
            report.data_delivered += 1
            report.per_packet_delay.append(to_seconds(int(record.detail["delay_ns"])))
        elif record.kind == "ctrl_tx":
            report.control_transmissions += 1
        elif record.kind == "fwd":
            forwarded[record.node] += 1
        elif record.kind == "drop":
            report.record_drop(record.detail["reason"])
        elif record.kind == "desc_drop":
            report.record_description_drop(record.detail["reason"])
    for node, count in forwarded.items():
        report.per_node_forwarded[node] = count
    return report

