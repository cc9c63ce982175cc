"""Unit tests for the graph module.

Covers deterministic Dijkstra, the penalty step and Multipath Dijkstra,
checked against networkx as an independent oracle.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import random
import unittest
from fractions import Fraction

import networkx as nx

from mpolsr.errors import NoRoute, UnknownSource
from mpolsr.routing.graph import (
    CostPolicy,
    TopologyGraph,
    apply_penalties,
    dijkstra,
    disjointness,
    get_path,
    multipath_dijkstra,
)

A, B, C, D, E, F, G = range(7)


def two_route_graph() -> TopologyGraph:
    """Two equal-length A-E routes meeting at D."""
    return TopologyGraph.from_links(
        [(A, B), (B, C), (C, D), (D, E), (A, F), (F, G), (G, D)]
    )


def random_connected_graph(rng: random.Random) -> TopologyGraph:
    n = rng.randint(4, 12)
    arcs = {}
    for v in range(1, n):
        u = rng.randrange(v)
        cost = rng.randint(1, 3)
        arcs[(u, v)] = cost
        arcs[(v, u)] = cost
    for _ in range(rng.randint(0, n // 2 + 1)):
        u, v = rng.sample(range(n), 2)
        arcs[(u, v)] = rng.randint(1, 3)
        arcs[(v, u)] = rng.randint(1, 3)
    return TopologyGraph(frozenset(range(n)), arcs)


def to_networkx(graph: TopologyGraph) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    for (u, v), cost in graph.arcs.items():
        g.add_edge(u, v, weight=cost)
    return g


def oracle_path(graph: TopologyGraph, source: int, dest: int):
    """Cheapest simple path, ties broken on the reversed hop sequence."""
    g = to_networkx(graph)
    best = None
    for hops in nx.all_simple_paths(g, source, dest):
        cost = sum(graph.arcs[arc] for arc in zip(hops, hops[1:]))
        key = (cost, tuple(reversed(hops)))
        if best is None or key < best:
            best = key
    return tuple(reversed(best[1])), best[0]


class TestDijkstra(unittest.TestCase):
    """Shortest paths with deterministic tie-breaking."""

    def test_equal_cost_tie_goes_to_smallest_predecessor(self):
        """Between A-B-C-D-E and A-F-G-D-E the route through C wins."""
        path = get_path(dijkstra(two_route_graph(), A), E)
        self.assertEqual(path.hops, (A, B, C, D, E))
        self.assertEqual(path.cost, 4)

    def test_source_equals_destination(self):
        """A route to oneself is the single-node path of cost 0."""
        path = get_path(dijkstra(two_route_graph(), C), C)
        self.assertEqual(path.hops, (C,))
        self.assertEqual(path.cost, 0)

    def test_unknown_source(self):
        """Starting outside the graph is an error."""
        with self.assertRaises(UnknownSource):
            dijkstra(two_route_graph(), 42)

    def test_unreachable_destination(self):
        """A node with no links cannot be reached."""
        graph = TopologyGraph.from_links([(0, 1)], nodes=[0, 1, 2])
        with self.assertRaises(NoRoute):
            get_path(dijkstra(graph, 0), 2)

    def test_distances_match_bellman_ford(self):
        """Distances agree with networkx Bellman-Ford on random graphs."""
        rng = random.Random(7)
        for _ in range(100):
            graph = random_connected_graph(rng)
            tree = dijkstra(graph, 0)
            expected = nx.single_source_bellman_ford_path_length(to_networkx(graph), 0)
            self.assertEqual(dict(tree.distance), {n: Fraction(d) for n, d in expected.items()})

    def test_path_follows_existing_arcs(self):
        """Every returned path is simple and made of graph arcs."""
        rng = random.Random(11)
        for _ in range(50):
            graph = random_connected_graph(rng)
            dest = max(graph.nodes)
            path = get_path(dijkstra(graph, 0), dest)
            self.assertEqual(len(set(path.hops)), len(path.hops))
            self.assertEqual(path.cost, sum(graph.arcs[a] for a in path.arcs()))


class TestTopologyGraph(unittest.TestCase):
    """Graph construction and validation."""

    def test_links_become_two_arcs(self):
        graph = TopologyGraph.from_links([(1, 2)])
        self.assertEqual(graph.cost(1, 2), 1)
        self.assertEqual(graph.cost(2, 1), 1)
        self.assertIsNone(graph.cost(1, 3))

    def test_rejects_self_loops_and_bad_costs(self):
        """Self-loops and non-positive costs are refused."""
        with self.assertRaises(ValueError):
            TopologyGraph(frozenset({1}), {(1, 1): 1})
        with self.assertRaises(ValueError):
            TopologyGraph(frozenset({1, 2}), {(1, 2): 0})
        with self.assertRaises(ValueError):
            TopologyGraph(frozenset({1}), {(1, 2): 1})

    def test_without_link_and_nodes(self):
        graph = two_route_graph()
        self.assertIsNone(graph.without_link(C, D).cost(D, C))
        pruned = graph.without_nodes([B])
        self.assertNotIn(B, pruned.nodes)
        self.assertIsNone(pruned.cost(A, B))
        self.assertEqual(pruned.successors(A), ((F, 1),))


class TestMultipathDijkstra(unittest.TestCase):
    """Iterated Dijkstra with f_p / f_e penalties."""

    def test_two_routes_through_shared_vertex(self):
        """The second route takes A-F-G-D-E once the first is penalized."""
        paths = multipath_dijkstra(A, E, two_route_graph(), 2, CostPolicy.doubling())
        self.assertEqual([p.hops for p in paths], [(A, B, C, D, E), (A, F, G, D, E)])
        self.assertEqual([p.cost for p in paths], [4, 6])

    def test_penalties_after_first_route(self):
        """Path arcs double both ways; arcs entering D from elsewhere double too."""
        graph = two_route_graph()
        first = get_path(dijkstra(graph, A), E)
        penalized = apply_penalties(graph, first, CostPolicy.doubling())
        for u, v in [(A, B), (B, C), (C, D), (D, E)]:
            self.assertEqual(penalized.cost(u, v), 2)
            self.assertEqual(penalized.cost(v, u), 2)
        self.assertEqual(penalized.cost(G, D), 2)
        self.assertEqual(penalized.cost(D, G), 1)
        self.assertEqual(penalized.cost(A, F), 1)
        self.assertEqual(penalized.cost(F, G), 1)

    def test_identity_policy_repeats_first_route(self):
        paths = multipath_dijkstra(A, E, two_route_graph(), 3, CostPolicy.identity())
        self.assertEqual({p.hops for p in paths}, {(A, B, C, D, E)})

    def test_single_route_is_plain_dijkstra(self):
        """N = 1 returns exactly the Dijkstra route."""
        graph = two_route_graph()
        paths = multipath_dijkstra(A, E, graph, 1, CostPolicy.doubling())
        self.assertEqual(paths, [get_path(dijkstra(graph, A), E)])

    def test_source_equals_destination(self):
        paths = multipath_dijkstra(C, C, two_route_graph(), 3, CostPolicy.doubling())
        self.assertEqual([p.hops for p in paths], [(C,)] * 3)

    def test_invalid_arguments(self):
        graph = two_route_graph()
        with self.assertRaises(ValueError):
            multipath_dijkstra(A, E, graph, 0, CostPolicy.doubling())
        with self.assertRaises(NoRoute):
            multipath_dijkstra(A, 99, graph, 2, CostPolicy.doubling())
        with self.assertRaises(UnknownSource):
            multipath_dijkstra(99, E, graph, 2, CostPolicy.doubling())

    def test_each_route_is_the_exhaustive_optimum(self):
        """50 random graphs: every P_i equals the enumerated best simple path."""
        rng = random.Random(2024)
        policy = CostPolicy.doubling()
        for _ in range(50):
            graph = random_connected_graph(rng)
            source, dest = 0, max(graph.nodes)
            n_routes = rng.randint(1, 4)
            paths = multipath_dijkstra(source, dest, graph, n_routes, policy)
            self.assertEqual(len(paths), n_routes)
            current = graph
            for path in paths:
                hops, cost = oracle_path(current, source, dest)
                self.assertEqual(path.hops, hops)
                self.assertEqual(path.cost, cost)
                current = apply_penalties(current, path, policy)

    def test_routes_are_valid_in_original_graph(self):
        """Each route is simple, starts at the source, ends at the destination."""
        rng = random.Random(5)
        for _ in range(50):
            graph = random_connected_graph(rng)
            dest = max(graph.nodes)
            for path in multipath_dijkstra(0, dest, graph, 3, CostPolicy.node_disjoint()):
                self.assertEqual((path.source, path.dest), (0, dest))
                self.assertEqual(len(set(path.hops)), len(path.hops))
                for arc in path.arcs():
                    self.assertIn(arc, graph.arcs)


class TestCostPolicy(unittest.TestCase):
    def test_presets(self):
        self.assertEqual(CostPolicy.doubling(), CostPolicy(2, 2))
        self.assertEqual(CostPolicy.link_disjoint(3), CostPolicy(3, 1))
        self.assertEqual(CostPolicy.node_disjoint(3), CostPolicy(3, 3))
        self.assertEqual(CostPolicy.doubling().f_p(Fraction(3, 2)), 3)

    def test_multipliers_below_one_rejected(self):
        with self.assertRaises(ValueError):
            CostPolicy(Fraction(1, 2), 1)


class TestDisjointness(unittest.TestCase):
    def test_routes_sharing_d_and_link_d_e(self):
        """The two A-E routes share vertex D and link D-E."""
        paths = multipath_dijkstra(A, E, two_route_graph(), 2, CostPolicy.doubling())
        report = disjointness(paths)
        self.assertEqual(report.shared_nodes, frozenset({D}))
        self.assertEqual(report.shared_links, frozenset({frozenset({D, E})}))
        self.assertFalse(report.node_disjoint)
        self.assertFalse(report.link_disjoint)

    def test_repeated_route_counts_once(self):
        path = get_path(dijkstra(two_route_graph(), A), E)
        self.assertTrue(disjointness([path, path]).node_disjoint)


if __name__ == "__main__":
    unittest.main()
