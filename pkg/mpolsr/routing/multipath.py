"""
On-demand multipath routing, semi-source-route forwarding with route
recovery, and the hop-by-hop unipath baseline.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from mpolsr.config.const import Constant
from mpolsr.errors import MisroutedPacket, NoRoute
from mpolsr.log import get_logger
from mpolsr.routing.graph import (
    CostPolicy,
    NodeId,
    Path,
    dijkstra,
    get_path,
    multipath_dijkstra,
)
from mpolsr.routing.olsr import (
    ProtocolState,
    build_topology_graph,
    expire,
    remove_neighbor,
)
from mpolsr.service.format import SimTime

logger = get_logger(__name__)


@dataclass
class SourceRouteHeader:
    """Hop list carried by a data packet plus the holder's position in it."""

    route: List[NodeId]
    cursor: int = 0
    recovery_count: int = 0

    @property
    def holder(self) -> NodeId:
        return self.route[self.cursor]

    @property
    def dest(self) -> NodeId:
        return self.route[-1]

    def next_hop(self) -> Optional[NodeId]:
        if self.cursor + 1 < len(self.route):
            return self.route[self.cursor + 1]
        return None

    def advance(self) -> None:
        self.cursor += 1

    def splice(self, new_route: Sequence[NodeId]) -> None:
        """Install a recovered route; the prefix up to the cursor is kept."""
        self.route = list(new_route)
        self.recovery_count += 1


@dataclass
class DataPacket:
    """A CBR data packet, or one MDC description travelling as data."""

    flow_id: int
    sequence: int
    payload_size: int
    created_at: SimTime
    source: NodeId
    dest: NodeId
    header: Optional[SourceRouteHeader] = None
    mdc_tag: Optional[Tuple[int, int]] = None
    ttl: int = Constant.data_ttl
    payload: Optional[object] = None


class DropReason(str, Enum):
    NO_ROUTE = "no_route"
    TTL_EXCEEDED = "ttl_exceeded"
    RECOVERY_LIMIT = "recovery_limit"
    LINK = "link"
    PENDING = "pending"
    INSUFFICIENT_DESCRIPTIONS = "insufficient_descriptions"


@dataclass(frozen=True)
class Deliver:
    pass


@dataclass(frozen=True)
class ForwardTo:
    next_hop: NodeId


@dataclass(frozen=True)
class Recovered:
    new_route: Tuple[NodeId, ...]
    next_hop: NodeId


@dataclass(frozen=True)
class Drop:
    reason: DropReason


ForwardDecision = Union[Deliver, ForwardTo, Recovered, Drop]


@dataclass
class RouteCache:
    """Multipath routes per (dest, N, policy), valid for one state version."""

    version: int = -1
    entries: Dict[Tuple[NodeId, int, CostPolicy], List[Path]] = field(default_factory=dict)

    def lookup(self, version: int, key) -> Optional[List[Path]]:
        if version != self.version:
            self.version = version
            self.entries.clear()
            return None
        return self.entries.get(key)

    def store(self, key, routes: List[Path]) -> None:
        self.entries[key] = routes


def compute_routes(
    state: ProtocolState,
    dest: NodeId,
    n_routes: int,
    policy: CostPolicy,
    now: SimTime,
    cache: Optional[RouteCache] = None,
) -> List[Path]:
    """
    Multipath Dijkstra over the node's current topology knowledge.

    Expired entries are swept first, so a cached result is reused only
    while nothing in the topology changed or expired. A destination that
    is a symmetric neighbor gets the direct link as every one of its
    routes.

    Raises:
        NoRoute: dest is unreachable.
    """
    if dest == state.self_id:
        raise ValueError("destination must differ from the computing node")
    expire(state, now)
    if n_routes < 1:
        raise ValueError("n_routes must be >= 1")
    if state.is_symmetric_neighbor(dest, now):
        return [Path((state.self_id, dest), Fraction(1))] * n_routes
    key = (dest, n_routes, policy)
    if cache is not None:
        cached = cache.lookup(state.version, key)
        if cached is not None:
            return cached
    routes = multipath_dijkstra(
        state.self_id, dest, build_topology_graph(state, now), n_routes, policy
    )
    if cache is not None:
        cache.store(key, routes)
    return routes


def allocate_route(sequence: int, routes: Sequence[Path]) -> Path:
    """Round-robin: packet `sequence` takes routes[sequence mod N]."""
    if not routes:
        raise ValueError("no routes to allocate from")
    return routes[sequence % len(routes)]


def route_recovery(
    state: ProtocolState,
    dest: NodeId,
    now: SimTime,
    failed_next_hop: Optional[NodeId] = None,
    avoid: Sequence[NodeId] = (),
) -> Path:
    """
    Recompute a single shortest path to dest from local topology only.

    The link to the failed next hop is removed first, and so are the
    `avoid` nodes (the part of the route already travelled).

    Raises:
        NoRoute: nothing left reaches dest.
    """
    graph = build_topology_graph(state, now)
    if failed_next_hop is not None:
        graph = graph.without_link(state.self_id, failed_next_hop)
    removed = [n for n in avoid if n not in (state.self_id, dest)]
    if removed:
        graph = graph.without_nodes(removed)
    if dest not in graph.nodes:
        raise NoRoute(Constant.error_no_route.format(source=state.self_id, dest=dest))
    return get_path(dijkstra(graph, state.self_id), dest)


def forward(
    state: ProtocolState,
    packet: DataPacket,
    now: SimTime,
    recovery: bool = True,
    recovery_cap: int = Constant.recovery_cap,
) -> ForwardDecision:
    """
    Decide what the holder of a source-routed packet does with it.

    With recovery disabled the header is obeyed blindly and a dead next
    hop is left for the MAC to discover.

    Raises:
        MisroutedPacket: the packet is not at this node's cursor position.
    """
    header = packet.header
    if header is None or header.holder != state.self_id:
        raise MisroutedPacket(
            Constant.error_misrouted.format(
                flow=packet.flow_id,
                seq=packet.sequence,
                node=state.self_id,
                expected=header.holder if header else None,
            )
        )
    next_hop = header.next_hop()
    if next_hop is None:
        return Deliver()
    if not recovery or state.is_symmetric_neighbor(next_hop, now):
        return ForwardTo(next_hop)

    if header.recovery_count >= recovery_cap:
        return Drop(DropReason.RECOVERY_LIMIT)
    prefix = header.route[: header.cursor]
    try:
        path = route_recovery(state, header.dest, now, next_hop, avoid=prefix)
    except NoRoute:
        return Drop(DropReason.NO_ROUTE)
    logger.debug(
        "node %s: next hop %s lost, recovered %s",
        state.self_id,
        next_hop,
        "->".join(map(str, path.hops)),
    )
    return Recovered(tuple(prefix) + path.hops, path.hops[1])


class UnipathVariant(str, Enum):
    PERIODIC = "periodic"
    FEEDBACK = "feedback"


@dataclass
class RoutingTable:
    """Hop-by-hop next hops of the OLSR baseline, rebuilt per topology version."""

    self_id: NodeId
    variant: UnipathVariant = UnipathVariant.FEEDBACK
    next_hops: Dict[NodeId, NodeId] = field(default_factory=dict)
    version: int = -1

    def recompute(self, state: ProtocolState, now: SimTime) -> None:
        tree = dijkstra(build_topology_graph(state, now), self.self_id)
        first_hop: Dict[NodeId, NodeId] = {}
        for node in sorted(tree.distance, key=lambda n: (tree.distance[n], n)):
            if node == self.self_id:
                continue
            parent = tree.predecessor[node]
            first_hop[node] = node if parent == self.self_id else first_hop[parent]
        self.next_hops = first_hop
        self.version = state.version

    def refresh(self, state: ProtocolState, now: SimTime) -> None:
        expire(state, now)
        if state.version != self.version:
            self.recompute(state, now)


def unipath_next_hop(
    state: ProtocolState, table: RoutingTable, dest: NodeId, now: SimTime
) -> NodeId:
    """
    Next hop toward dest from the baseline routing table.

    Raises:
        NoRoute: dest is not in the table.
    """
    table.refresh(state, now)
    try:
        return table.next_hops[dest]
    except KeyError:
        raise NoRoute(
            Constant.error_no_route.format(source=state.self_id, dest=dest)
        ) from None


def forward_unipath(
    state: ProtocolState, table: RoutingTable, packet: DataPacket, now: SimTime
) -> ForwardDecision:
    """Hop-by-hop forwarding decision of the OLSR baseline."""
    if packet.dest == state.self_id:
        return Deliver()
    if packet.ttl <= 0:
        return Drop(DropReason.TTL_EXCEEDED)
    try:
        return ForwardTo(unipath_next_hop(state, table, packet.dest, now))
    except NoRoute:
        return Drop(DropReason.NO_ROUTE)


def notify_link_failure(
    state: ProtocolState,
    neighbor: NodeId,
    now: SimTime,
    table: Optional[RoutingTable] = None,
) -> None:
    """MAC retry timeout toward neighbor: drop the link, refresh routing."""
    remove_neighbor(state, neighbor, now)
    if table is not None and table.variant is UnipathVariant.FEEDBACK:
        table.recompute(state, now)
