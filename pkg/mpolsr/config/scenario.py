"""
Scenario description, validation and the `key = value` scenario file format.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from typing import Dict, List, Tuple

from thefuzz import fuzz, process

from mpolsr.config.const import Constant
from mpolsr.errors import InvalidScenario, ScenarioParseError


class Variant(str, Enum):
    """Protocol variants compared by the simulator."""

    OLSR = "olsr"
    OLSR_FB = "olsr-fb"
    SR_MPOLSR = "sr-mpolsr"
    RE_MPOLSR = "re-mpolsr"
    MDC_MPOLSR = "mdc-mpolsr"

    @property
    def multipath(self) -> bool:
        return self in (Variant.SR_MPOLSR, Variant.RE_MPOLSR, Variant.MDC_MPOLSR)

    @property
    def feedback(self) -> bool:
        return self is not Variant.OLSR

    @property
    def recovery(self) -> bool:
        return self in (Variant.RE_MPOLSR, Variant.MDC_MPOLSR)

    @property
    def mdc(self) -> bool:
        return self is Variant.MDC_MPOLSR


PLACEMENTS = ("uniform", "line")
SUGGESTION_SCORE = 60


@dataclass(frozen=True)
class Scenario:
    """Everything one simulation run depends on."""

    area_width_m: float = 1000.0
    area_height_m: float = 1000.0
    node_count: int = 50
    duration_s: float = 200.0
    warmup_s: float = 20.0
    tx_range_m: float = Constant.tx_range_m
    bandwidth_bps: float = Constant.bandwidth_bps
    hello_interval_s: float = Constant.hello_interval_s
    tc_interval_s: float = Constant.tc_interval_s
    neighb_hold_multiplier: float = Constant.neighb_hold_multiplier
    top_hold_multiplier: float = Constant.top_hold_multiplier
    variant: Variant = Variant.RE_MPOLSR
    n_routes: int = Constant.n_routes
    fp_mult: float = Constant.fp_multiplier
    fe_mult: float = Constant.fe_multiplier
    mdc_n: int = Constant.mdc_n
    mdc_m: int = Constant.mdc_m
    mdc_group_size: int = Constant.mdc_group_size
    mdc_flush_factor: float = Constant.mdc_flush_factor
    cbr_flow_count: int = 30
    cbr_rate_pps: float = Constant.cbr_rate_pps
    payload_bytes: int = Constant.payload_bytes
    cbr_max_packets: int = 0
    v_min: float = 0.0
    v_max: float = 10.0
    pause_s: float = Constant.pause_s
    recovery_cap: int = Constant.recovery_cap
    seed: int = 1
    placement: str = "uniform"
    line_spacing_m: float = 200.0
    mac_overhead_bytes: int = Constant.mac_overhead_bytes
    mac_retry_limit: int = Constant.mac_retry_limit
    mac_retry_interval_s: float = Constant.mac_retry_interval_s
    mobility_tick_s: float = Constant.mobility_tick_s
    drain_s: float = Constant.drain_s

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["variant"] = self.variant.value
        return data

    @property
    def routes_per_flow(self) -> int:
        """Multipath routes used per destination (N descriptions under MDC)."""
        return self.mdc_n if self.variant.mdc else self.n_routes

    def validate(self) -> "Scenario":
        """
        Check cross-field constraints.

        Raises:
            InvalidScenario: with one (field, problem) entry per violation.
        """
        problems: List[Tuple[str, str]] = []

        def need(condition: bool, name: str, problem: str):
            if not condition:
                problems.append((name, problem))

        need(self.area_width_m > 0 and self.area_height_m > 0, "area", "must be positive")
        need(self.node_count >= 1, "node_count", "must be >= 1")
        need(self.duration_s > 0, "duration_s", "must be positive")
        need(0 <= self.warmup_s < self.duration_s, "warmup_s", "must satisfy 0 <= warmup_s < duration_s")
        need(self.tx_range_m > 0, "tx_range_m", "must be positive")
        need(self.bandwidth_bps > 0, "bandwidth_bps", "must be positive")
        need(self.hello_interval_s > 0, "hello_interval_s", "must be positive")
        need(self.tc_interval_s > 0, "tc_interval_s", "must be positive")
        need(self.neighb_hold_multiplier > 0, "neighb_hold_multiplier", "must be positive")
        need(self.top_hold_multiplier > 0, "top_hold_multiplier", "must be positive")
        need(self.n_routes >= 1, "n_routes", "must be >= 1")
        need(self.fp_mult >= 1, "fp_mult", "must be >= 1")
        need(self.fe_mult >= 1, "fe_mult", "must be >= 1")
        need(self.mdc_n >= 1, "mdc_n", "must be >= 1")
        need(0 < self.mdc_m <= self.mdc_n, "mdc_m", "must satisfy 0 < mdc_m <= mdc_n")
        need(self.mdc_group_size >= 1, "mdc_group_size", "must be >= 1")
        need(self.mdc_flush_factor > 0, "mdc_flush_factor", "must be positive")
        need(self.cbr_flow_count >= 0, "cbr_flow_count", "must be >= 0")
        need(
            self.cbr_flow_count == 0 or self.node_count >= 2,
            "cbr_flow_count",
            "flows need at least two nodes",
        )
        need(self.cbr_rate_pps > 0, "cbr_rate_pps", "must be positive")
        need(self.payload_bytes >= 1, "payload_bytes", "must be >= 1")
        need(self.cbr_max_packets >= 0, "cbr_max_packets", "must be >= 0")
        need(self.v_min >= 0, "v_min", "must be >= 0")
        need(self.v_min <= self.v_max, "v_max", "must be >= v_min")
        need(self.pause_s >= 0, "pause_s", "must be >= 0")
        need(self.recovery_cap >= 0, "recovery_cap", "must be >= 0")
        need(0 <= self.seed < 2**64, "seed", "must be a 64-bit unsigned integer")
        need(self.placement in PLACEMENTS, "placement", f"must be one of {', '.join(PLACEMENTS)}")
        need(
            self.placement != "line"
            or (self.node_count - 1) * self.line_spacing_m <= self.area_width_m,
            "line_spacing_m",
            "line does not fit in area_width_m",
        )
        need(self.mac_overhead_bytes >= 0, "mac_overhead_bytes", "must be >= 0")
        need(self.mac_retry_limit >= 1, "mac_retry_limit", "must be >= 1")
        need(self.mac_retry_interval_s >= 0, "mac_retry_interval_s", "must be >= 0")
        need(self.mobility_tick_s > 0, "mobility_tick_s", "must be positive")
        need(self.drain_s >= 0, "drain_s", "must be >= 0")

        if problems:
            raise InvalidScenario(problems)
        return self


FIELD_TYPES = {f.name: f.type for f in fields(Scenario)}


def _convert(key: str, raw: str, line: int):
    kind = FIELD_TYPES[key]
    try:
        if kind is Variant:
            return Variant(raw)
        if kind is int:
            return int(raw, 0)
        if kind is float:
            return float(raw)
        return raw
    except ValueError:
        raise ScenarioParseError(
            Constant.error_bad_value.format(value=raw, kind=getattr(kind, "__name__", kind), key=key),
            line,
            key,
        ) from None


def suggest_key(key: str):
    """Closest known scenario key, or None when nothing is close."""
    match = process.extractOne(key, list(FIELD_TYPES), scorer=fuzz.ratio)
    if match and match[1] >= SUGGESTION_SCORE:
        return match[0]
    return None


def parse_scenario(text: str, base: Scenario = None) -> Scenario:
    """
    Read `key = value` lines over `base` (defaults when omitted).

    Blank lines and `#` comments are skipped.

    Raises:
        ScenarioParseError: malformed line, unknown key or bad value.
        InvalidScenario: the result fails validation.
    """
    values = {}
    for number, original in enumerate(text.splitlines(), start=1):
        line = original.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioParseError(Constant.error_bad_line.format(text=original.strip()), number)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in FIELD_TYPES:
            raise ScenarioParseError(
                Constant.error_unknown_key.format(key=key), number, key, suggest_key(key)
            )
        values[key] = _convert(key, raw, number)
    return (base or Scenario()).replace(**values).validate()


def load_scenario(path: str) -> Scenario:
    """Parse a scenario file."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_scenario(f.read())


def dump_scenario(scenario: Scenario) -> str:
    """Render a scenario in the file format parse_scenario reads."""
    return "".join(f"{key} = {value}\n" for key, value in scenario.to_dict().items())


def reference_scenario(**changes) -> Scenario:
    """50 nodes in 1000 m x 1000 m for 200 s, 30 CBR flows of 10 x 512 B/s."""
    return Scenario().replace(**changes).validate()


def desk_scenario(**changes) -> Scenario:
    """Desk-scale comparison: 20 nodes, 500 m x 500 m, 60 s, 5 flows."""
    return (
        Scenario(
            area_width_m=500.0,
            area_height_m=500.0,
            node_count=20,
            duration_s=60.0,
            warmup_s=20.0,
            cbr_flow_count=5,
        )
        .replace(**changes)
        .validate()
    )


def dense_mdc_scenario(**changes) -> Scenario:
    """The 100-node comparison of MDC against recovery and feedback OLSR."""
    return (
        Scenario(
            node_count=100,
            variant=Variant.MDC_MPOLSR,
            mdc_n=4,
            mdc_m=2,
            n_routes=4,
            v_min=6.0,
            v_max=10.0,
        )
        .replace(**changes)
        .validate()
    )
