"""
Weighted topology graphs and the Multipath Dijkstra algorithm.

A TopologyGraph is a directed graph with exact rational arc costs. Routes
are found with a deterministic Dijkstra (ties go to the smallest node id)
and the multipath variant repeatedly penalizes the arcs of the previous
route (f_p) and the arcs leading into its intermediate vertices (f_e).

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from mpolsr.config.const import Constant
from mpolsr.errors import NoRoute, UnknownSource

NodeId = int
Arc = Tuple[NodeId, NodeId]


@dataclass(frozen=True)
class TopologyGraph:
    """Directed graph over node ids with strictly positive arc costs."""

    nodes: FrozenSet[NodeId]
    arcs: Mapping[Arc, Fraction]
    _succ: Dict[NodeId, Tuple[Tuple[NodeId, Fraction], ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        arcs = {}
        succ: Dict[NodeId, List[Tuple[NodeId, Fraction]]] = {}
        for (tail, head), cost in self.arcs.items():
            cost = Fraction(cost)
            if tail == head:
                raise ValueError(f"self-loop arc on node {tail}")
            if cost <= 0:
                raise ValueError(f"arc {tail}->{head} has non-positive cost {cost}")
            if tail not in self.nodes or head not in self.nodes:
                raise ValueError(f"arc {tail}->{head} references an unknown node")
            arcs[(tail, head)] = cost
            succ.setdefault(tail, []).append((head, cost))
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(
            self, "_succ", {u: tuple(sorted(vs)) for u, vs in succ.items()}
        )

    @classmethod
    def from_links(
        cls,
        links: Iterable[Tuple[NodeId, NodeId]],
        nodes: Iterable[NodeId] = (),
        cost=1,
    ) -> "TopologyGraph":
        """
        Build a graph from undirected links, each stored as two arcs.

        Args:
            links: (a, b) pairs; duplicates are harmless.
            nodes: Extra isolated nodes to include.
            cost: Cost given to every arc.
        """
        all_nodes = set(nodes)
        arcs = {}
        for a, b in links:
            all_nodes.update((a, b))
            arcs[(a, b)] = Fraction(cost)
            arcs[(b, a)] = Fraction(cost)
        return cls(frozenset(all_nodes), arcs)

    def successors(self, node: NodeId) -> Tuple[Tuple[NodeId, Fraction], ...]:
        """(head, cost) pairs leaving node, sorted by head id."""
        return self._succ.get(node, ())

    def cost(self, tail: NodeId, head: NodeId) -> Optional[Fraction]:
        return self.arcs.get((tail, head))

    def with_costs(self, arcs: Mapping[Arc, Fraction]) -> "TopologyGraph":
        """Same nodes, new cost map."""
        return TopologyGraph(self.nodes, arcs)

    def without_link(self, a: NodeId, b: NodeId) -> "TopologyGraph":
        """Drop both arcs between a and b."""
        return self.with_costs(
            {arc: c for arc, c in self.arcs.items() if arc not in ((a, b), (b, a))}
        )

    def without_nodes(self, removed: Iterable[NodeId]) -> "TopologyGraph":
        """Drop the given nodes and every arc touching them."""
        removed = set(removed)
        return TopologyGraph(
            self.nodes - removed,
            {
                (u, v): c
                for (u, v), c in self.arcs.items()
                if u not in removed and v not in removed
            },
        )


@dataclass(frozen=True)
class Path:
    """A node-simple route with its cost in the graph it was computed in."""

    hops: Tuple[NodeId, ...]
    cost: Fraction

    @property
    def source(self) -> NodeId:
        return self.hops[0]

    @property
    def dest(self) -> NodeId:
        return self.hops[-1]

    @property
    def intermediates(self) -> Tuple[NodeId, ...]:
        return self.hops[1:-1]

    def arcs(self) -> List[Arc]:
        return list(zip(self.hops, self.hops[1:]))

    def __len__(self) -> int:
        return len(self.hops)


@dataclass(frozen=True)
class CostPolicy:
    """Multipliers used by the incremental cost functions f_p and f_e."""

    fp_multiplier: Fraction = Fraction(Constant.fp_multiplier)
    fe_multiplier: Fraction = Fraction(Constant.fe_multiplier)

    def __post_init__(self):
        object.__setattr__(self, "fp_multiplier", Fraction(self.fp_multiplier))
        object.__setattr__(self, "fe_multiplier", Fraction(self.fe_multiplier))
        if self.fp_multiplier < 1 or self.fe_multiplier < 1:
            raise ValueError("cost multipliers must be >= 1")

    @classmethod
    def doubling(cls) -> "CostPolicy":
        """f_p(c) = f_e(c) = 2c."""
        return cls(2, 2)

    @classmethod
    def identity(cls) -> "CostPolicy":
        return cls(1, 1)

    @classmethod
    def link_disjoint(cls, factor=4) -> "CostPolicy":
        """Penalize reused arcs only; vertices may be shared freely."""
        return cls(factor, 1)

    @classmethod
    def node_disjoint(cls, factor=4) -> "CostPolicy":
        """Penalize both reused arcs and arcs entering used vertices."""
        return cls(factor, factor)

    def f_p(self, cost: Fraction) -> Fraction:
        return cost * self.fp_multiplier

    def f_e(self, cost: Fraction) -> Fraction:
        return cost * self.fe_multiplier


@dataclass(frozen=True)
class SourceTree:
    """Shortest-path tree rooted at `root`."""

    root: NodeId
    predecessor: Mapping[NodeId, NodeId]
    distance: Mapping[NodeId, Fraction]

    def reaches(self, node: NodeId) -> bool:
        return node in self.distance


def dijkstra(graph: TopologyGraph, source: NodeId) -> SourceTree:
    """
    Standard Dijkstra from source with deterministic tie-breaking.

    Nodes at equal distance are extracted smallest id first, and among
    equal-cost predecessors the smallest id wins.

    Raises:
        UnknownSource: source is not in graph.nodes.
    """
    if source not in graph.nodes:
        raise UnknownSource(Constant.error_unknown_source.format(source=source))

    distance: Dict[NodeId, Fraction] = {source: Fraction(0)}
    predecessor: Dict[NodeId, NodeId] = {}
    done = set()
    heap = [(Fraction(0), source)]

    while heap:
        dist_u, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, cost in graph.successors(u):
            if v in done:
                continue
            candidate = dist_u + cost
            known = distance.get(v)
            if known is None or candidate < known:
                distance[v] = candidate
                predecessor[v] = u
                heapq.heappush(heap, (candidate, v))
            elif candidate == known and u < predecessor[v]:
                predecessor[v] = u

    return SourceTree(source, predecessor, distance)


def get_path(tree: SourceTree, dest: NodeId) -> Path:
    """
    Read the root-to-dest route off the predecessor links.

    Raises:
        NoRoute: dest was not reached.
    """
    if not tree.reaches(dest):
        raise NoRoute(Constant.error_no_route.format(source=tree.root, dest=dest))
    hops = [dest]
    while hops[-1] != tree.root:
        hops.append(tree.predecessor[hops[-1]])
    hops.reverse()
    return Path(tuple(hops), tree.distance[dest])


def apply_penalties(
    graph: TopologyGraph, path: Path, policy: CostPolicy
) -> TopologyGraph:
    """
    Return the graph for the next Multipath Dijkstra step.

    Arcs of the path, in either direction, go through f_p. Any other arc
    whose head is an intermediate vertex of the path goes through f_e. The
    path endpoints are excluded from f_e since every later route still has
    to leave the source and enter the destination.
    """
    on_path = set()
    for a, b in path.arcs():
        on_path.add((a, b))
        on_path.add((b, a))
    inner = set(path.intermediates)

    costs = {}
    for arc, cost in graph.arcs.items():
        if arc in on_path:
            costs[arc] = policy.f_p(cost)
        elif arc[1] in inner:
            costs[arc] = policy.f_e(cost)
        else:
            costs[arc] = cost
    return graph.with_costs(costs)


def multipath_dijkstra(
    source: NodeId,
    dest: NodeId,
    graph: TopologyGraph,
    n_routes: int,
    policy: CostPolicy,
) -> List[Path]:
    """
    Compute n_routes routes by iterated Dijkstra with cost penalties.

    Always returns exactly n_routes paths once the first one exists;
    repeated paths are allowed when alternatives are costlier.

    Raises:
        NoRoute: dest is unreachable in the original graph.
        UnknownSource: source is not in the graph.
    """
    if n_routes < 1:
        raise ValueError("n_routes must be >= 1")
    if dest not in graph.nodes:
        raise NoRoute(Constant.error_no_route.format(source=source, dest=dest))

    paths = []
    current = graph
    for step in range(n_routes):
        path = get_path(dijkstra(current, source), dest)
        paths.append(path)
        if step + 1 < n_routes:
            current = apply_penalties(current, path, policy)
    return paths


@dataclass(frozen=True)
class Disjointness:
    """How much a set of routes overlaps."""

    shared_nodes: FrozenSet[NodeId]
    shared_links: FrozenSet[FrozenSet[NodeId]]

    @property
    def node_disjoint(self) -> bool:
        return not self.shared_nodes

    @property
    def link_disjoint(self) -> bool:
        return not self.shared_links


def disjointness(paths: Iterable[Path]) -> Disjointness:
    """Intermediate nodes and undirected links used by more than one distinct route."""
    distinct = list(dict.fromkeys(p.hops for p in paths))
    node_use: Dict[NodeId, int] = {}
    link_use: Dict[FrozenSet[NodeId], int] = {}
    for hops in distinct:
        for node in set(hops[1:-1]):
            node_use[node] = node_use.get(node, 0) + 1
        for link in {frozenset(arc) for arc in zip(hops, hops[1:])}:
            link_use[link] = link_use.get(link, 0) + 1
    return Disjointness(
        frozenset(n for n, k in node_use.items() if k > 1),
        frozenset(l for l, k in link_use.items() if k > 1),
    )
