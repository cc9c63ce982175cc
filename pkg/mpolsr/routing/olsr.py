"""
Topology sensing: HELLO/TC processing, neighbor and 2-hop tracking, MPR
selection and the topology set.

A ProtocolState belongs to exactly one node. The operations below take the
state, update it and hand it back; none of them keeps module-level state.
All times are simulation ticks (see mpolsr.service.format).

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Container, Dict, FrozenSet, Optional, Set, Tuple

from mpolsr.config.const import Constant
from mpolsr.errors import SelfMessage
from mpolsr.log import get_logger
from mpolsr.routing.graph import NodeId, TopologyGraph
from mpolsr.service.format import SimTime, seconds

logger = get_logger(__name__)


class LinkStatus(str, Enum):
    """Link status advertised in a HELLO."""

    ASYMMETRIC = "asymmetric"
    SYMMETRIC = "symmetric"
    MPR = "mpr"


@dataclass(frozen=True)
class HelloMessage:
    """One-hop neighborhood advertisement."""

    originator: NodeId
    listed_neighbors: Tuple[Tuple[NodeId, LinkStatus], ...]
    validity: SimTime

    def size_bytes(self) -> int:
        return (
            Constant.hello_base_bytes
            + Constant.hello_entry_bytes * len(self.listed_neighbors)
        )


@dataclass(frozen=True)
class TcMessage:
    """Topology control advertisement of the originator's MPR selectors."""

    originator: NodeId
    advertised: Tuple[NodeId, ...]
    sequence: int
    validity: SimTime

    @property
    def key(self) -> Tuple[NodeId, int]:
        return self.originator, self.sequence

    def size_bytes(self) -> int:
        return Constant.tc_base_bytes + Constant.tc_entry_bytes * len(self.advertised)


@dataclass
class NeighborTuple:
    status: LinkStatus
    expiry: SimTime


@dataclass(frozen=True)
class TopologyTuple:
    dest: NodeId
    last_hop: NodeId
    sequence: int
    expiry: SimTime


@dataclass
class ProtocolState:
    """
    OLSR information bases of a single node.

    `version` increases whenever the set of links that
    build_topology_graph would expose changes; route caches key on it.
    """

    self_id: NodeId
    neighbor_hold: SimTime = seconds(Constant.hello_interval_s * Constant.neighb_hold_multiplier)
    topology_hold: SimTime = seconds(Constant.tc_interval_s * Constant.top_hold_multiplier)
    neighbor_set: Dict[NodeId, NeighborTuple] = field(default_factory=dict)
    two_hop_set: Dict[Tuple[NodeId, NodeId], SimTime] = field(default_factory=dict)
    mpr_set: Set[NodeId] = field(default_factory=set)
    mpr_selector_set: Dict[NodeId, SimTime] = field(default_factory=dict)
    topology_set: Dict[Tuple[NodeId, NodeId], TopologyTuple] = field(default_factory=dict)
    tc_sequences: Dict[NodeId, int] = field(default_factory=dict)
    duplicate_set: Dict[Tuple[NodeId, int], SimTime] = field(default_factory=dict)
    tc_sequence: int = 0
    last_tc_empty: bool = True
    stale_tc_count: int = 0
    version: int = 0

    @classmethod
    def for_intervals(
        cls,
        self_id: NodeId,
        hello_interval_s: float = Constant.hello_interval_s,
        tc_interval_s: float = Constant.tc_interval_s,
        neighb_hold_multiplier: float = Constant.neighb_hold_multiplier,
        top_hold_multiplier: float = Constant.top_hold_multiplier,
    ) -> "ProtocolState":
        return cls(
            self_id,
            neighbor_hold=seconds(hello_interval_s * neighb_hold_multiplier),
            topology_hold=seconds(tc_interval_s * top_hold_multiplier),
        )

    def symmetric_neighbors(self, now: Optional[SimTime] = None) -> Set[NodeId]:
        return {
            n
            for n, t in self.neighbor_set.items()
            if t.status is not LinkStatus.ASYMMETRIC and (now is None or t.expiry >= now)
        }

    def is_symmetric_neighbor(self, node: NodeId, now: SimTime) -> bool:
        entry = self.neighbor_set.get(node)
        return (
            entry is not None
            and entry.status is not LinkStatus.ASYMMETRIC
            and entry.expiry >= now
        )

    def _neighborhood(self) -> Tuple[FrozenSet[NodeId], FrozenSet[Tuple[NodeId, NodeId]]]:
        return frozenset(self.symmetric_neighbors()), frozenset(self.two_hop_set)


def _settle(state: ProtocolState, before) -> bool:
    """Recompute MPRs and bump the version if the neighborhood changed."""
    if state._neighborhood() == before:
        return False
    state.mpr_set = select_mprs(state)
    state.version += 1
    return True


def generate_hello(state: ProtocolState, now: SimTime) -> HelloMessage:
    """List every live neighbor with its status; MPRs are marked mpr."""
    listed = []
    for node in sorted(state.neighbor_set):
        entry = state.neighbor_set[node]
        if entry.expiry < now:
            continue
        status = entry.status
        if status is LinkStatus.SYMMETRIC and node in state.mpr_set:
            status = LinkStatus.MPR
        listed.append((node, status))
    return HelloMessage(state.self_id, tuple(listed), state.neighbor_hold)


def process_hello(state: ProtocolState, msg: HelloMessage, now: SimTime) -> ProtocolState:
    """
    Apply a HELLO heard over one hop.

    The originator becomes symmetric when it lists us (under any status)
    and asymmetric otherwise. A HELLO states the originator's whole
    neighborhood, so 2-hop entries through it are replaced, and it stays
    an MPR selector only while it keeps marking us mpr.

    Raises:
        SelfMessage: the HELLO is our own.
    """
    if msg.originator == state.self_id:
        logger.debug(Constant.error_self_message.format(node=state.self_id))
        raise SelfMessage(Constant.error_self_message.format(node=state.self_id))

    before = state._neighborhood()
    origin = msg.originator
    expiry = now + msg.validity
    listed = dict(msg.listed_neighbors)
    our_status = listed.get(state.self_id)

    status = LinkStatus.SYMMETRIC if our_status is not None else LinkStatus.ASYMMETRIC
    state.neighbor_set[origin] = NeighborTuple(status, expiry)

    for key in [k for k in state.two_hop_set if k[0] == origin]:
        del state.two_hop_set[key]
    if status is LinkStatus.SYMMETRIC:
        for node, link in listed.items():
            if node != state.self_id and link is not LinkStatus.ASYMMETRIC:
                state.two_hop_set[(origin, node)] = expiry

    if our_status is LinkStatus.MPR:
        state.mpr_selector_set[origin] = expiry
    else:
        state.mpr_selector_set.pop(origin, None)

    _settle(state, before)
    return state


def select_mprs(state: ProtocolState) -> Set[NodeId]:
    """
    Greedy MPR cover of the strict 2-hop neighborhood.

    Neighbors that are the only way to some 2-hop node are taken first;
    then the neighbor covering most uncovered nodes is added until
    everything is covered (ties: smallest id).
    """
    symmetric = state.symmetric_neighbors()
    coverage: Dict[NodeId, Set[NodeId]] = {n: set() for n in symmetric}
    for neighbor, two_hop in sorted(state.two_hop_set):
        if two_hop == state.self_id or two_hop in symmetric:
            continue
        if neighbor not in symmetric:
            logger.debug(
                "node %s: 2-hop %s via non-symmetric %s dropped from MPR selection",
                state.self_id,
                two_hop,
                neighbor,
            )
            continue
        coverage[neighbor].add(two_hop)

    uncovered: Set[NodeId] = set()
    for reach in coverage.values():
        uncovered |= reach

    mprs: Set[NodeId] = set()
    for two_hop in sorted(uncovered):
        providers = [n for n in sorted(symmetric) if two_hop in coverage[n]]
        if len(providers) == 1:
            mprs.add(providers[0])
    for mpr in mprs:
        uncovered -= coverage[mpr]

    while uncovered:
        best = min(
            (n for n in symmetric if n not in mprs),
            key=lambda n: (-len(coverage[n] & uncovered), n),
        )
        mprs.add(best)
        uncovered -= coverage[best]
    return mprs


def generate_tc(state: ProtocolState, now: SimTime) -> Optional[TcMessage]:
    """
    Build the next TC advertising our MPR selectors.

    An empty TC is emitted once after the selector set empties, so other
    nodes drop our links; after that nothing is sent until we have
    selectors again.
    """
    selectors = tuple(
        sorted(n for n, expiry in state.mpr_selector_set.items() if expiry >= now)
    )
    if not selectors and state.last_tc_empty:
        return None
    state.tc_sequence += 1
    state.last_tc_empty = not selectors
    msg = TcMessage(state.self_id, selectors, state.tc_sequence, state.topology_hold)
    mark_seen(state, msg, now)
    return msg


def process_tc(state: ProtocolState, msg: TcMessage, now: SimTime) -> ProtocolState:
    """
    Apply a TC: older sequences are discarded and counted, otherwise the
    originator's topology tuples are replaced by the advertised set.
    """
    origin = msg.originator
    if origin == state.self_id:
        return state
    latest = state.tc_sequences.get(origin)
    if latest is not None and msg.sequence < latest:
        state.stale_tc_count += 1
        logger.debug(
            "node %s: stale TC %s/%s (have %s)", state.self_id, origin, msg.sequence, latest
        )
        return state
    state.tc_sequences[origin] = msg.sequence

    expiry = now + msg.validity
    old_keys = {key for key in state.topology_set if key[1] == origin}
    new_keys = {(dest, origin) for dest in msg.advertised}
    for key in old_keys - new_keys:
        del state.topology_set[key]
    for dest in msg.advertised:
        state.topology_set[(dest, origin)] = TopologyTuple(dest, origin, msg.sequence, expiry)
    if old_keys != new_keys:
        state.version += 1
    return state


def should_forward_flood(
    state: ProtocolState,
    msg: TcMessage,
    previous_hop: NodeId,
    seen: Container[Tuple[NodeId, int]],
) -> bool:
    """MPR flooding rule: relay only for a selector, and only once."""
    return previous_hop in state.mpr_selector_set and msg.key not in seen


def mark_seen(state: ProtocolState, msg: TcMessage, now: SimTime) -> None:
    state.duplicate_set[msg.key] = now + state.topology_hold


def build_topology_graph(state: ProtocolState, now: SimTime) -> TopologyGraph:
    """
    Unit-cost graph of every link the unexpired information bases justify:
    self to symmetric neighbors, neighbor to 2-hop, last hop to TC dest.
    """
    nodes = {state.self_id}
    links = set()
    for node, entry in state.neighbor_set.items():
        if entry.expiry < now:
            continue
        if entry.status is not LinkStatus.ASYMMETRIC:
            nodes.add(node)
            links.add((state.self_id, node))
    for (neighbor, two_hop), expiry in state.two_hop_set.items():
        if expiry >= now:
            links.add((neighbor, two_hop))
    for entry in state.topology_set.values():
        if entry.expiry >= now:
            links.add((entry.last_hop, entry.dest))
    return TopologyGraph.from_links(sorted(links), nodes)


def expire(state: ProtocolState, now: SimTime) -> ProtocolState:
    """Drop every entry whose expiry precedes now."""
    before = state._neighborhood()
    topology_before = len(state.topology_set)

    for node in [n for n, t in state.neighbor_set.items() if t.expiry < now]:
        del state.neighbor_set[node]
    for key in [
        k
        for k, expiry in state.two_hop_set.items()
        if expiry < now or k[0] not in state.neighbor_set
    ]:
        del state.two_hop_set[key]
    for node in [n for n, expiry in state.mpr_selector_set.items() if expiry < now]:
        del state.mpr_selector_set[node]
    for key in [k for k, t in state.topology_set.items() if t.expiry < now]:
        del state.topology_set[key]
    for key in [k for k, expiry in state.duplicate_set.items() if expiry < now]:
        del state.duplicate_set[key]

    if not _settle(state, before) and len(state.topology_set) != topology_before:
        state.version += 1
    return state


def remove_neighbor(state: ProtocolState, neighbor: NodeId, now: SimTime) -> ProtocolState:
    """
    Link-layer feedback: forget the neighbor and every link joining us to it.
    """
    before = state._neighborhood()
    state.neighbor_set.pop(neighbor, None)
    for key in [k for k in state.two_hop_set if k[0] == neighbor]:
        del state.two_hop_set[key]
    state.mpr_selector_set.pop(neighbor, None)
    dropped = False
    for key in ((neighbor, state.self_id), (state.self_id, neighbor)):
        dropped = state.topology_set.pop(key, None) is not None or dropped
    if not _settle(state, before) and dropped:
        state.version += 1
    logger.debug("node %s: link to %s reported down at %s", state.self_id, neighbor, now)
    return state
