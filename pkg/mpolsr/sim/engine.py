"""
Deterministic discrete-event MANET simulator.

One Simulator instance runs one Scenario. Everything random is drawn from
a single random.Random seeded with scenario.seed, events are processed in
(time, ordinal) order and nodes are always visited in id order, so the
report and the trace are a pure function of the scenario.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import heapq
import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, TextIO, Tuple

import numpy as np

from mpolsr.coding.buffer import EncodedGroup, GroupAssembler, GroupBuffer
from mpolsr.coding.mojette import CodecConfig, Description
from mpolsr.config.const import Constant
from mpolsr.config.scenario import Scenario
from mpolsr.errors import NoRoute, SelfMessage, SimulationError
from mpolsr.log import get_logger
from mpolsr.routing.graph import CostPolicy, NodeId
from mpolsr.routing.multipath import (
    DataPacket,
    Deliver,
    Drop,
    DropReason,
    ForwardDecision,
    ForwardTo,
    Recovered,
    RouteCache,
    RoutingTable,
    SourceRouteHeader,
    UnipathVariant,
    allocate_route,
    compute_routes,
    forward,
    forward_unipath,
    notify_link_failure,
)
from mpolsr.routing.olsr import (
    HelloMessage,
    ProtocolState,
    TcMessage,
    expire,
    generate_hello,
    generate_tc,
    mark_seen,
    process_hello,
    process_tc,
    should_forward_flood,
)
from mpolsr.service.format import SimTime, seconds, to_seconds
from mpolsr.service.metrics import MetricsReport
from mpolsr.sim.dispatch import Event, EventDispatcher, EventKind
from mpolsr.sim.mac import (
    Delivered,
    Frame,
    MacParams,
    MacQueue,
    mac_transmit,
    transmit_ready_at,
)
from mpolsr.sim.mobility import MobileState, MobilityParams, Position, mobility_step
from mpolsr.sim.trace import TraceWriter

logger = get_logger(__name__)


@dataclass
class MobileNode:
    """A node: where it is, what it knows and what it has to send."""

    id: NodeId
    motion: MobileState
    protocol: ProtocolState
    queue: MacQueue = field(default_factory=MacQueue)
    route_cache: RouteCache = field(default_factory=RouteCache)
    table: Optional[RoutingTable] = None
    forwarded_data_count: int = 0
    radio_busy_until: SimTime = 0

    @property
    def position(self) -> Position:
        return self.motion.position


@dataclass
class Flow:
    """A CBR source; under MDC it also owns the coding buffers."""

    id: int
    source: NodeId
    dest: NodeId
    start: SimTime
    interval: SimTime
    sent: int = 0
    buffer: Optional[GroupBuffer] = None
    assembler: Optional[GroupAssembler] = None


@dataclass
class GroupRecord:
    """Fate of one MDC group: its original packets and its descriptions."""

    members: Tuple[int, ...]
    descriptions: int
    dropped: int = 0
    settled: bool = False


class Simulator:
    """Wires mobility, radio, MAC, topology sensing and the variant's routing."""

    def __init__(self, scenario: Scenario, trace: Optional[TextIO] = None):
        self.scenario = scenario.validate()
        self.variant = scenario.variant
        self.rng = random.Random(scenario.seed)
        self.trace = TraceWriter(trace)
        self.report = MetricsReport(node_count=scenario.node_count)

        self.policy = CostPolicy(scenario.fp_mult, scenario.fe_mult)
        self.mac_params = MacParams(
            bandwidth_bps=scenario.bandwidth_bps,
            overhead_bytes=scenario.mac_overhead_bytes,
            retry_limit=scenario.mac_retry_limit,
            tx_range_m=scenario.tx_range_m,
            feedback=self.variant.feedback,
            retry_interval=seconds(scenario.mac_retry_interval_s),
        )
        self.mobility = MobilityParams(
            width=scenario.area_width_m,
            height=scenario.area_height_m,
            v_min=scenario.v_min,
            v_max=scenario.v_max,
            pause=seconds(scenario.pause_s),
            tick=seconds(scenario.mobility_tick_s),
        )
        self.codec = CodecConfig(scenario.mdc_n, scenario.mdc_m) if self.variant.mdc else None

        self.hello_interval = seconds(scenario.hello_interval_s)
        self.tc_interval = seconds(scenario.tc_interval_s)
        self.sweep_interval = seconds(Constant.expiry_sweep_interval_s)
        self.traffic_end = seconds(scenario.duration_s)
        self.end = seconds(scenario.duration_s + scenario.drain_s)

        self.now: SimTime = 0
        self.finished = False
        self.events: List[Event] = []
        self._ordinal = itertools.count()
        self.outstanding: Dict[Tuple[int, int], DataPacket] = {}
        self.groups: Dict[Tuple[int, int], GroupRecord] = {}

        self.dispatcher = EventDispatcher()
        self.dispatcher.register_handlers(
            {
                EventKind.HELLO_DUE: self.on_hello_due,
                EventKind.TC_DUE: self.on_tc_due,
                EventKind.CBR_SEND: self.on_cbr_send,
                EventKind.MAC_DEQUEUE: self.on_mac_dequeue,
                EventKind.PACKET_ARRIVAL: self.on_packet_arrival,
                EventKind.EXPIRY_SWEEP: self.on_expiry_sweep,
                EventKind.MOBILITY_UPDATE: self.on_mobility_update,
                EventKind.GROUP_FLUSH: self.on_group_flush,
                EventKind.SIM_END: lambda event: None,
            }
        )

        self.nodes = self._place_nodes()
        self.flows = self._draw_flows()
        self._schedule_initial()

    # Setup

    def _place_nodes(self) -> List[MobileNode]:
        s = self.scenario
        nodes = []
        for node_id in range(s.node_count):
            if s.placement == "line":
                position = (node_id * s.line_spacing_m, s.area_height_m / 2)
            else:
                position = (
                    self.rng.uniform(0, s.area_width_m),
                    self.rng.uniform(0, s.area_height_m),
                )
            protocol = ProtocolState.for_intervals(
                node_id,
                s.hello_interval_s,
                s.tc_interval_s,
                s.neighb_hold_multiplier,
                s.top_hold_multiplier,
            )
            table = None
            if not self.variant.multipath:
                variant = UnipathVariant.FEEDBACK if self.variant.feedback else UnipathVariant.PERIODIC
                table = RoutingTable(node_id, variant)
            nodes.append(MobileNode(node_id, MobileState(position, position), protocol, table=table))
        return nodes

    def _draw_flows(self) -> List[Flow]:
        s = self.scenario
        interval = seconds(1.0 / s.cbr_rate_pps)
        flows = []
        for flow_id in range(s.cbr_flow_count):
            source = self.rng.randrange(s.node_count)
            dest = self.rng.randrange(s.node_count - 1)
            if dest >= source:
                dest += 1
            start = seconds(s.warmup_s) + self.rng.randrange(interval)
            flow = Flow(flow_id, source, dest, start, interval)
            if self.codec is not None:
                flow.buffer = GroupBuffer(self.codec, s.mdc_group_size)
                flow.assembler = GroupAssembler(self.codec)
            flows.append(flow)
        return flows

    def _schedule_initial(self) -> None:
        for node in self.nodes:
            self.schedule(self.rng.randrange(self.hello_interval), EventKind.HELLO_DUE, node.id)
            self.schedule(self.rng.randrange(self.tc_interval), EventKind.TC_DUE, node.id)
        self.schedule(self.sweep_interval, EventKind.EXPIRY_SWEEP)
        if self.mobility.v_max > 0:
            self.schedule(self.mobility.tick, EventKind.MOBILITY_UPDATE)
        for flow in self.flows:
            if flow.start < self.traffic_end:
                self.schedule(flow.start, EventKind.CBR_SEND, payload=flow)
        self.schedule(self.end, EventKind.SIM_END)

    # Event loop

    def schedule(
        self, time: SimTime, kind: EventKind, node: Optional[NodeId] = None, payload=None
    ) -> None:
        if time < self.now:
            raise SimulationError(f"event {kind.value} scheduled in the past")
        heapq.heappush(self.events, Event(time, next(self._ordinal), kind, node, payload))

    def advance(self, until: SimTime) -> bool:
        """
        Process every event due at or before `until`.

        Returns False once sim_end has been handled.
        """
        while not self.finished and self.events and self.events[0].time <= until:
            event = heapq.heappop(self.events)
            self.now = event.time
            self.trace.record(event.time, event.node, event.kind.value)
            self.dispatcher.dispatch(event)
            if event.kind is EventKind.SIM_END:
                self.finished = True
        return not self.finished

    def run(self) -> MetricsReport:
        logger.debug(
            "simulating %s: %d nodes, %d flows, seed %d",
            self.variant.value,
            self.scenario.node_count,
            len(self.flows),
            self.scenario.seed,
        )
        self.advance(self.end)
        self._finish()
        return self.report

    def _finish(self) -> None:
        for key in sorted(self.groups):
            group = self.groups[key]
            if not group.settled:
                self._settle_group(key[0], group, DropReason.PENDING)
        for flow_id, sequence in sorted(self.outstanding):
            self._drop_original(flow_id, sequence, DropReason.PENDING)

    # Control traffic

    def on_hello_due(self, event: Event) -> None:
        node = self.nodes[event.node]
        msg = generate_hello(node.protocol, self.now)
        self.enqueue(node, Frame(msg, msg.size_bytes(), node.id))
        self.schedule(self.now + self.hello_interval, EventKind.HELLO_DUE, node.id)

    def on_tc_due(self, event: Event) -> None:
        node = self.nodes[event.node]
        msg = generate_tc(node.protocol, self.now)
        if msg is not None:
            self.enqueue(node, Frame(msg, msg.size_bytes(), node.id))
        self.schedule(self.now + self.tc_interval, EventKind.TC_DUE, node.id)

    def on_expiry_sweep(self, event: Event) -> None:
        for node in self.nodes:
            expire(node.protocol, self.now)
        self.schedule(self.now + self.sweep_interval, EventKind.EXPIRY_SWEEP)

    def on_mobility_update(self, event: Event) -> None:
        for node in self.nodes:
            mobility_step(node.motion, self.now, self.rng, self.mobility)
        self.schedule(self.now + self.mobility.tick, EventKind.MOBILITY_UPDATE)

    def _receive_hello(self, node: MobileNode, msg: HelloMessage) -> None:
        try:
            process_hello(node.protocol, msg, self.now)
        except SelfMessage:
            pass

    def _receive_tc(self, node: MobileNode, sender: NodeId, msg: TcMessage) -> None:
        state = node.protocol
        if msg.originator == node.id or not state.is_symmetric_neighbor(sender, self.now):
            return
        relay = should_forward_flood(state, msg, sender, state.duplicate_set)
        if msg.key not in state.duplicate_set:
            process_tc(state, msg, self.now)
            mark_seen(state, msg, self.now)
        if relay:
            self.enqueue(node, Frame(msg, msg.size_bytes(), node.id))

    # Data traffic

    def on_cbr_send(self, event: Event) -> None:
        flow: Flow = event.payload
        s = self.scenario
        sequence = flow.sent
        flow.sent += 1
        packet = DataPacket(flow.id, sequence, s.payload_bytes, self.now, flow.source, flow.dest)
        self.outstanding[(flow.id, sequence)] = packet
        self.report.data_sent += 1
        self.trace.record(self.now, flow.source, "data_sent", flow=flow.id, seq=sequence)

        if flow.buffer is not None:
            group = flow.buffer.add(self._payload(flow.id, sequence), member=sequence)
            if group is not None:
                self._send_group(flow, group)
            elif flow.buffer.pending == 1:
                self.schedule(
                    self.now + round(flow.interval * s.mdc_group_size * s.mdc_flush_factor),
                    EventKind.GROUP_FLUSH,
                    payload=(flow, flow.buffer.open_group),
                )
        else:
            self._originate(flow, packet)

        next_time = self.now + flow.interval
        exhausted = s.cbr_max_packets and flow.sent >= s.cbr_max_packets
        if next_time < self.traffic_end and not exhausted:
            self.schedule(next_time, EventKind.CBR_SEND, payload=flow)
        elif flow.buffer is not None:
            tail = flow.buffer.flush()
            if tail is not None:
                self._send_group(flow, tail)

    def on_group_flush(self, event: Event) -> None:
        flow, group_id = event.payload
        if flow.buffer.open_group == group_id and flow.buffer.pending:
            self._send_group(flow, flow.buffer.flush())

    def _payload(self, flow_id: int, sequence: int) -> bytes:
        size = self.scenario.payload_bytes
        return ((np.arange(size) + flow_id * 7 + sequence) % 256).astype(np.uint8).tobytes()

    def _originate(self, flow: Flow, packet: DataPacket) -> None:
        source = self.nodes[flow.source]
        if self.variant.multipath:
            try:
                routes = compute_routes(
                    source.protocol,
                    flow.dest,
                    self.scenario.routes_per_flow,
                    self.policy,
                    self.now,
                    source.route_cache,
                )
            except NoRoute:
                self._drop(packet, DropReason.NO_ROUTE)
                return
            index = packet.mdc_tag[1] if packet.mdc_tag else packet.sequence
            packet.header = SourceRouteHeader(list(allocate_route(index, routes).hops))
        self._route(source, packet)

    def _send_group(self, flow: Flow, group: EncodedGroup) -> None:
        self.groups[(flow.id, group.group_id)] = GroupRecord(
            group.members, len(group.descriptions)
        )
        for description in group.descriptions:
            packet = DataPacket(
                flow.id,
                group.group_id,
                description.size_bytes(),
                self.now,
                flow.source,
                flow.dest,
                mdc_tag=(group.group_id, description.index),
                payload=description,
            )
            self._originate(flow, packet)

    def _route(self, node: MobileNode, packet: DataPacket) -> None:
        """Apply the variant's forwarding decision at the packet's holder."""
        decision: ForwardDecision
        if self.variant.multipath:
            decision = forward(
                node.protocol,
                packet,
                self.now,
                recovery=self.variant.recovery,
                recovery_cap=self.scenario.recovery_cap,
            )
        else:
            decision = forward_unipath(node.protocol, node.table, packet, self.now)

        if isinstance(decision, Deliver):
            self._deliver(node, packet)
        elif isinstance(decision, Recovered):
            packet.header.splice(decision.new_route)
            self.trace.record(
                self.now,
                node.id,
                "recover",
                flow=packet.flow_id,
                seq=packet.sequence,
                route="-".join(map(str, decision.new_route)),
            )
            self.enqueue(node, Frame(packet, packet.payload_size, node.id, decision.next_hop))
        elif isinstance(decision, ForwardTo):
            self.enqueue(node, Frame(packet, packet.payload_size, node.id, decision.next_hop))
        elif isinstance(decision, Drop):
            self._drop(packet, decision.reason, node.id)

    def _deliver(self, node: MobileNode, packet: DataPacket) -> None:
        if packet.mdc_tag is None:
            self._deliver_original(packet.flow_id, packet.sequence, node.id)
            return
        flow = self.flows[packet.flow_id]
        description: Description = packet.payload
        key = (packet.flow_id, description.group_id)
        group = self.groups[key]
        if flow.assembler.offer(description) is not None and not group.settled:
            group.settled = True
            for sequence in group.members:
                self._deliver_original(packet.flow_id, sequence, node.id)

    def _deliver_original(self, flow_id: int, sequence: int, node_id: NodeId) -> None:
        original = self.outstanding.pop((flow_id, sequence), None)
        if original is None:
            return
        delay = self.now - original.created_at
        self.report.data_delivered += 1
        self.report.per_packet_delay.append(to_seconds(delay))
        self.trace.record(
            self.now, node_id, "deliver", flow=flow_id, seq=sequence, delay_ns=delay
        )

    def _drop(self, packet: DataPacket, reason: DropReason, node_id: Optional[NodeId] = None) -> None:
        if packet.mdc_tag is None:
            self._drop_original(packet.flow_id, packet.sequence, reason, node_id)
            return
        self.report.record_description_drop(reason.value)
        self.trace.record(
            self.now,
            node_id,
            "desc_drop",
            flow=packet.flow_id,
            group=packet.mdc_tag[0],
            index=packet.mdc_tag[1],
            reason=reason.value,
        )
        group = self.groups[(packet.flow_id, packet.mdc_tag[0])]
        group.dropped += 1
        if not group.settled and group.dropped > group.descriptions - self.codec.m_required:
            self._settle_group(packet.flow_id, group, DropReason.INSUFFICIENT_DESCRIPTIONS)

    def _settle_group(self, flow_id: int, group: GroupRecord, reason: DropReason) -> None:
        group.settled = True
        for sequence in group.members:
            self._drop_original(flow_id, sequence, reason)

    def _drop_original(
        self,
        flow_id: int,
        sequence: int,
        reason: DropReason,
        node_id: Optional[NodeId] = None,
    ) -> None:
        if self.outstanding.pop((flow_id, sequence), None) is None:
            return
        self.report.record_drop(reason.value)
        self.trace.record(self.now, node_id, "drop", flow=flow_id, seq=sequence, reason=reason.value)

    # MAC and radio

    def enqueue(self, node: MobileNode, frame: Frame) -> None:
        node.queue.frames.append(frame)
        if not node.queue.busy:
            node.queue.busy = True
            self.schedule(self.now, EventKind.MAC_DEQUEUE, node.id)

    def on_mac_dequeue(self, event: Event) -> None:
        node = self.nodes[event.node]
        queue = node.queue
        if not queue.frames:
            queue.busy = False
            return
        positions = {n.id: n.position for n in self.nodes}
        radio_busy = {n.id: n.radio_busy_until for n in self.nodes}
        ready = transmit_ready_at(queue.frames[0], positions, radio_busy, self.now, self.mac_params)
        if ready > self.now:
            self.schedule(ready, EventKind.MAC_DEQUEUE, node.id)
            return
        if queue.last_dequeue is not None and self.now <= queue.last_dequeue:
            raise SimulationError(f"node {node.id}: MAC dequeue times must increase")
        queue.last_dequeue = self.now

        frame = queue.frames.popleft()
        outcome = mac_transmit(frame, positions, self.now, self.mac_params)
        node.radio_busy_until = outcome.busy_until
        self.schedule(outcome.busy_until, EventKind.MAC_DEQUEUE, node.id)

        message = frame.payload
        if isinstance(message, (HelloMessage, TcMessage)):
            self.report.control_transmissions += 1
            self.trace.record(
                self.now,
                node.id,
                "ctrl_tx",
                type="hello" if isinstance(message, HelloMessage) else "tc",
                size=frame.size_bytes,
            )

        if isinstance(outcome, Delivered):
            if isinstance(message, DataPacket) and node.id != message.source:
                node.forwarded_data_count += 1
                self.report.per_node_forwarded[node.id] += 1
                self.trace.record(
                    self.now, node.id, "fwd", flow=message.flow_id, seq=message.sequence
                )
            for receiver in outcome.receivers:
                listener = self.nodes[receiver]
                listener.radio_busy_until = max(listener.radio_busy_until, outcome.delivered_at)
                self.schedule(
                    outcome.delivered_at,
                    EventKind.PACKET_ARRIVAL,
                    receiver,
                    payload=(node.id, message),
                )
            return

        # Unicast retry timeout: only data frames are unicast.
        self._drop(message, DropReason.LINK, node.id)
        if outcome.feedback_emitted:
            self._link_failure(node, frame.receiver)

    def _link_failure(self, node: MobileNode, neighbor: NodeId) -> None:
        """Feedback: forget the neighbor and re-route what was queued for it."""
        self.trace.record(self.now, node.id, "link_fail", neighbor=neighbor)
        notify_link_failure(node.protocol, neighbor, self.now, node.table)
        stranded = [f for f in node.queue.frames if f.receiver == neighbor]
        if not stranded:
            return
        node.queue.frames = deque(f for f in node.queue.frames if f.receiver != neighbor)
        for frame in stranded:
            self._route(node, frame.payload)

    def on_packet_arrival(self, event: Event) -> None:
        node = self.nodes[event.node]
        sender, message = event.payload
        if isinstance(message, HelloMessage):
            self._receive_hello(node, message)
        elif isinstance(message, TcMessage):
            self._receive_tc(node, sender, message)
        else:
            if self.variant.multipath:
                message.header.advance()
            else:
                message.ttl -= 1
            self._route(node, message)


def run(scenario: Scenario, trace: Optional[TextIO] = None) -> MetricsReport:
    """
    Simulate one scenario.

    Args:
        scenario: The run description; validated first.
        trace: Optional text sink receiving one record per event.

    Raises:
        InvalidScenario: the scenario fails validation.
    """
    return Simulator(scenario, trace).run()
