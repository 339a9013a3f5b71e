from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from expects import be_empty, be_false, be_true, contain, equal, expect, raise_error

from laplab.exceptions import CliqueLimitError, GraphError
from laplab.graph import (
    CliqueSystem,
    UndirectedGraph,
    bipartite_graph,
    clique_closure,
    complete_graph,
    conditional_support,
    grid_graph,
    induced_edges,
    induced_graph,
    marginal_clique_system,
    maximal_cliques,
    neighbors,
    one_neighbourhood,
    one_node_neighbourhood,
    outside_boundaries,
    preserves_potential,
    relative_path_connected,
    strong_lap_satisfied,
)

from .helpers import FIGURE_DOMAIN, pairwise_structure, random_domain, random_graph


def brute_force_maximal_cliques(g: UndirectedGraph):
    cliques = [
        subset
        for size in range(1, g.num_nodes + 1)
        for subset in combinations(g.nodes, size)
        if all(g.has_edge(i, j) for i, j in combinations(subset, 2))
    ]
    return sorted(c for c in cliques if not any(set(c) < set(other) for other in cliques))


def path_connected_oracle(g: UndirectedGraph, domain, i: int, j: int) -> bool:
    # a path from i to j with every interior node outside the domain, never the direct edge
    outside = [node for node in g.nodes if node not in domain]
    graph = g.to_networkx(outside + [i, j])
    if graph.has_edge(i, j):
        graph.remove_edge(i, j)
    return nx.has_path(graph, i, j)


class TestUndirectedGraph:
    def test_normalizes_edge_orientation(self):
        g = UndirectedGraph(3, [(1, 0), (2, 1)])

        expect(g.sorted_edges).to(equal(((0, 1), (1, 2))))
        expect(g.has_edge(1, 0)).to(be_true)

    def test_rejects_self_loops(self):
        expect(lambda: UndirectedGraph(3, [(1, 1)])).to(raise_error(GraphError))

    def test_rejects_out_of_range_nodes(self):
        expect(lambda: UndirectedGraph(3, [(0, 3)])).to(raise_error(GraphError))

    def test_rejects_repeated_pairs(self):
        expect(lambda: UndirectedGraph(3, [(0, 1), (1, 0)])).to(raise_error(GraphError))

    def test_relabel(self, figure):
        sub, mapping = figure.relabel([4, 5, 7])

        expect(mapping).to(equal({4: 0, 5: 1, 7: 2}))
        expect(sub.edges).to(equal(frozenset({(0, 1), (0, 2)})))


class TestNeighbors:
    def test_figure_neighbours(self, figure):
        expect(neighbors(figure, 7)).to(equal(frozenset({4, 8})))
        expect(neighbors(figure, 5)).to(equal(frozenset({2, 4, 6, 8})))

    def test_isolated_node(self, figure):
        expect(neighbors(figure, 0)).to(be_empty)

    def test_out_of_range(self, figure):
        expect(lambda: neighbors(figure, 10)).to(raise_error(GraphError))


class TestMaximalCliques:
    def test_grid_cliques_are_its_edges(self):
        g = grid_graph(3, 3)

        expect(maximal_cliques(g).cliques).to(equal(g.sorted_edges))

    def test_triangle(self):
        expect(maximal_cliques(complete_graph(3)).cliques).to(equal(((0, 1, 2),)))

    def test_edgeless_graph_gives_singletons(self):
        expect(maximal_cliques(UndirectedGraph(3)).cliques).to(equal(((0,), (1,), (2,))))

    def test_cap(self):
        expect(lambda: maximal_cliques(grid_graph(3, 3), cap=5)).to(raise_error(CliqueLimitError))

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(7, 0.5, rng)

        expect(list(maximal_cliques(g).cliques)).to(equal(brute_force_maximal_cliques(g)))


class TestCliqueSystem:
    def test_rejects_duplicates(self):
        expect(lambda: CliqueSystem(((0, 1), (1, 0)))).to(raise_error(GraphError))

    def test_maximal_keeps_uncontained_cliques(self, figure_structure):
        maximal = figure_structure.cliques.maximal()

        # node 0 is isolated so its unary clique is not contained in any edge
        expect(maximal.cliques).to(equal(((0,),) + figure_structure.graph.sorted_edges))

    def test_closure(self):
        expect(clique_closure([(0, 1, 2)]).cliques).to(
            equal(((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)))
        )


class TestNeighbourhoods:
    def test_one_neighbourhood(self, figure_structure):
        expect(one_neighbourhood(figure_structure.cliques, (7, 8))).to(equal(frozenset(FIGURE_DOMAIN)))

    def test_one_neighbourhood_of_complete_graph(self):
        structure = pairwise_structure(complete_graph(5))

        expect(one_neighbourhood(structure.cliques, (0, 1))).to(equal(frozenset(range(5))))

    def test_uncovered_clique(self, figure_structure):
        expect(lambda: one_neighbourhood(figure_structure.cliques, (7, 9))).to(raise_error(GraphError))

    def test_one_node_neighbourhood(self, figure):
        expect(one_node_neighbourhood(figure, (7, 8), 7)).to(equal(frozenset({4, 7, 8})))
        expect(one_node_neighbourhood(figure, (7, 8), 8)).to(equal(frozenset({5, 7, 8, 9})))

    def test_one_node_neighbourhood_needs_a_member(self, figure):
        expect(lambda: one_node_neighbourhood(figure, (7, 8), 4)).to(raise_error(GraphError))


class TestRelativePathConnectivity:
    def test_figure_pairs(self, figure):
        expect(relative_path_connected(figure, FIGURE_DOMAIN, 5, 9)).to(be_true)
        expect(relative_path_connected(figure, FIGURE_DOMAIN, 4, 9)).to(be_true)
        expect(relative_path_connected(figure, FIGURE_DOMAIN, 7, 8)).to(be_false)
        expect(relative_path_connected(figure, FIGURE_DOMAIN, 9, 5)).to(be_true)

    def test_whole_vertex_set(self, figure):
        expect(relative_path_connected(figure, figure.nodes, 7, 8)).to(be_false)

    def test_requires_distinct_members(self, figure):
        expect(lambda: relative_path_connected(figure, FIGURE_DOMAIN, 1, 7)).to(raise_error(GraphError))
        expect(lambda: relative_path_connected(figure, FIGURE_DOMAIN, 7, 7)).to(raise_error(GraphError))

    def test_induced_edges(self, figure):
        expect(induced_edges(figure, FIGURE_DOMAIN)).to(equal(frozenset({(4, 5), (4, 9), (5, 9)})))

    def test_no_induced_edges_without_outside(self, figure):
        expect(induced_edges(figure, figure.nodes)).to(be_empty)

    def test_induced_graph_of_path(self):
        path = UndirectedGraph(3, [(0, 1), (1, 2)])

        expect(induced_graph(path, [0, 2])).to(equal(UndirectedGraph(2, [(0, 1)])))

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_path_enumeration(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(8, 0.35, rng)
        domain = random_domain(8, rng)
        expected = {
            (i, j) for i, j in combinations(domain, 2) if path_connected_oracle(g, frozenset(domain), i, j)
        }

        expect(induced_edges(g, domain)).to(equal(frozenset(expected)))

    @pytest.mark.parametrize("seed", range(10))
    def test_cliques_of_the_induced_graph_are_connected_subsets(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(7, 0.35, rng)
        domain = random_domain(7, rng)
        index = {node: position for position, node in enumerate(domain)}
        cliques = [set(clique) for clique in maximal_cliques(induced_graph(g, domain))]

        for size in range(2, len(domain) + 1):
            for subset in combinations(domain, size):
                in_a_clique = any({index[node] for node in subset} <= clique for clique in cliques)
                connected = all(relative_path_connected(g, domain, i, j) for i, j in combinations(subset, 2))
                expect(in_a_clique).to(equal(connected))


class TestMarginalCliqueSystem:
    def test_figure_with_induced_edges(self, figure, figure_structure):
        system = marginal_clique_system(figure, figure_structure.cliques, FIGURE_DOMAIN)

        expect(system.cliques).to(equal(((4, 5, 9), (4, 7), (5, 8, 9), (7, 8))))

    def test_figure_without_induced_edges(self, figure, figure_structure):
        system = marginal_clique_system(figure, figure_structure.cliques, FIGURE_DOMAIN, induced=False)

        expect(system.cliques).to(equal(((4, 5), (4, 7), (5, 8), (7, 8), (8, 9))))

    def test_ends_of_a_path(self):
        path = UndirectedGraph(3, [(0, 1), (1, 2)])
        structure = pairwise_structure(path)

        expect(marginal_clique_system(path, structure.cliques, [0, 2]).cliques).to(equal(((0, 2),)))

    def test_whole_vertex_set(self, grid_structure):
        g = grid_structure.graph

        expect(marginal_clique_system(g, grid_structure.cliques, g.nodes).cliques).to(equal(g.sorted_edges))


class TestStrongLap:
    def test_full_neighbourhood(self, figure):
        expect(strong_lap_satisfied(figure, FIGURE_DOMAIN, (7, 8))).to(be_true)

    def test_one_node_neighbourhood(self, figure):
        expect(strong_lap_satisfied(figure, (4, 7, 8), (7, 8))).to(be_true)

    def test_violations(self, figure):
        expect(strong_lap_satisfied(figure, (5, 7, 8), (7, 8))).to(be_false)
        expect(strong_lap_satisfied(figure, (7, 8), (7, 8))).to(be_false)

    def test_singletons_are_vacuous(self, figure):
        expect(strong_lap_satisfied(figure, (7,), (7,))).to(be_true)

    def test_clique_outside_domain(self, figure):
        expect(lambda: strong_lap_satisfied(figure, (4, 7), (7, 8))).to(raise_error(GraphError))

    @pytest.mark.parametrize("seed", range(20))
    def test_monotone_in_domain(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(8, 0.4, rng)
        if not g.edges:
            return
        q = g.sorted_edges[int(rng.integers(len(g.edges)))]
        domain = set(q) | set(random_domain(8, rng))
        larger = domain | set(random_domain(8, rng))

        if strong_lap_satisfied(g, domain, q):
            expect(strong_lap_satisfied(g, larger, q)).to(be_true)

    @pytest.mark.parametrize("seed", range(10))
    def test_one_neighbourhood_always_satisfies(self, seed):
        rng = np.random.default_rng(seed)
        structure = pairwise_structure(random_graph(8, 0.4, rng))

        for q in structure.graph.sorted_edges:
            domain = one_neighbourhood(structure.cliques, q)
            expect(strong_lap_satisfied(structure.graph, domain, q)).to(be_true)

    @pytest.mark.parametrize("graph", [grid_graph(3, 3), complete_graph(5)], ids=["grid", "complete"])
    def test_node_neighbourhoods_certify_pseudo_likelihood(self, graph):
        structure = pairwise_structure(graph)

        for m in graph.nodes:
            domain = {m} | neighbors(graph, m)
            for clique in structure.cliques:
                if m in clique:
                    expect(strong_lap_satisfied(graph, domain, clique)).to(be_true)


class TestPreservesPotential:
    def test_singleton_needs_its_neighbours(self, figure):
        expect(preserves_potential(figure, (4, 7, 8), (7,))).to(be_true)
        expect(preserves_potential(figure, (4, 7, 8), (8,))).to(be_false)

    def test_pairs_follow_strong_lap(self, figure):
        expect(preserves_potential(figure, (4, 7, 8), (7, 8))).to(be_true)
        expect(preserves_potential(figure, (5, 7, 8), (7, 8))).to(be_false)


class TestOutsideBoundaries:
    def test_figure(self, figure):
        expect(outside_boundaries(figure, FIGURE_DOMAIN)).to(
            equal([(frozenset({0}), ()), (frozenset({1, 2, 3, 6}), (4, 5, 9))])
        )

    def test_no_outside(self, figure):
        expect(outside_boundaries(figure, figure.nodes)).to(be_empty)


class TestConditionalSupport:
    def test_node_without_outside_neighbours(self, figure, figure_structure):
        support = conditional_support(figure, figure_structure.cliques, FIGURE_DOMAIN, 7)

        expect(support.cliques).to(equal(((7,), (4, 7), (7, 8))))

    def test_node_on_the_boundary(self, figure, figure_structure):
        support = conditional_support(figure, figure_structure.cliques, FIGURE_DOMAIN, 9)

        expect(support.cliques).to(equal(((9,), (4, 9), (5, 9), (8, 9), (4, 5, 9))))

    def test_node_outside_domain(self, figure, figure_structure):
        expect(lambda: conditional_support(figure, figure_structure.cliques, FIGURE_DOMAIN, 1)).to(
            raise_error(GraphError)
        )


class TestFamilies:
    def test_grid(self):
        g = grid_graph(3, 3)

        expect(g.num_nodes).to(equal(9))
        expect(len(g.edges)).to(equal(12))
        expect(g.edges).to(contain((0, 1), (0, 3), (4, 5), (4, 7)))

    def test_complete(self):
        expect(len(complete_graph(5).edges)).to(equal(10))

    def test_bipartite(self):
        g = bipartite_graph(3, 2)

        expect(g.num_nodes).to(equal(5))
        expect(g.edges).to(equal(frozenset({(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)})))

    def test_invalid_dimensions(self):
        expect(lambda: grid_graph(0, 3)).to(raise_error(GraphError))
        expect(lambda: complete_graph(0)).to(raise_error(GraphError))
