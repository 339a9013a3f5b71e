from itertools import product

import numpy as np
import pytest
from expects import be_below, be_true, equal, expect, raise_error
from scipy.special import logsumexp

from laplab.exceptions import EnumerationLimitError, FormatError, GraphError, PotentialError
from laplab.graph import CliqueSystem, UndirectedGraph, grid_graph, neighbors
from laplab.model import (
    Dataset,
    ModelStructure,
    MrfModel,
    dataset_from_rows,
    empirical_distribution,
    exact_conditional,
    exact_joint,
    exact_marginal,
    log_unnormalized,
    model_from_tables,
    partition_function,
    read_dataset,
    read_model,
    read_structure,
    sample_exact,
    sample_gibbs,
    site_conditional,
    sufficient_statistics,
    write_dataset,
    write_model,
)
from laplab.potentials import PotentialTable

from .helpers import pairwise_structure, random_model


def single_edge_model(edge: float, unary=(0.0, 0.0)) -> MrfModel:
    structure = pairwise_structure(UndirectedGraph(2, [(0, 1)]))
    return MrfModel.from_vector(structure, [unary[0], unary[1], edge])


class TestStructure:
    def test_pairwise_lists_unaries_first(self):
        structure = pairwise_structure(UndirectedGraph(3, [(1, 2), (0, 1)]))

        expect(structure.cliques.cliques).to(equal(((0,), (1,), (2,), (0, 1), (1, 2))))

    def test_rejects_cliques_that_are_not_complete(self):
        g = UndirectedGraph(3, [(0, 1)])

        expect(lambda: ModelStructure(g, CliqueSystem(((0, 2),)), (2, 2, 2))).to(raise_error(GraphError))

    def test_rejects_binary_less_cards(self):
        expect(lambda: pairwise_structure(UndirectedGraph(2, [(0, 1)]), card=1)).to(raise_error(GraphError))

    def test_model_tables_must_match_cliques(self):
        g = UndirectedGraph(2, [(0, 1)])
        tables = (PotentialTable.zeros((0,), (2,)),)

        expect(lambda: MrfModel(g, CliqueSystem(((1,),)), (2, 2), tables)).to(raise_error(PotentialError))


class TestExactInference:
    def test_log_unnormalized(self):
        model = single_edge_model(0.5)

        expect(log_unnormalized(model, (0, 0))).to(equal(0.0))
        expect(log_unnormalized(model, (1, 1))).to(equal(-0.5))

    def test_partition_function_of_zero_model(self, grid_structure):
        model = MrfModel.from_vector(grid_structure, np.zeros(grid_structure.dimension))

        expect(abs(partition_function(model) - 9 * np.log(2))).to(be_below(1e-12))

    def test_partition_function_of_single_node(self):
        structure = pairwise_structure(UndirectedGraph(1))
        model = MrfModel.from_vector(structure, [0.8])

        expect(abs(partition_function(model) - np.log(1 + np.exp(-0.8)))).to(be_below(1e-12))

    def test_partition_function_matches_brute_force(self):
        model = random_model(pairwise_structure(grid_graph(2, 3), card=3), seed=5)
        brute = logsumexp([log_unnormalized(model, x) for x in product(range(3), repeat=6)])

        expect(abs(partition_function(model) - brute)).to(be_below(1e-10))

    def test_enumeration_cap(self, grid_structure):
        model = random_model(grid_structure, seed=0)

        expect(lambda: partition_function(model, cap=100)).to(raise_error(EnumerationLimitError))

    def test_joint_sums_to_one(self, grid_structure):
        joint = exact_joint(random_model(grid_structure, seed=1))

        expect(abs(joint.sum() - 1.0)).to(be_below(1e-12))

    def test_marginal_over_everything_is_the_joint(self, grid_structure):
        model = random_model(grid_structure, seed=1)

        expect(np.allclose(exact_marginal(model, range(9)).probabilities, exact_joint(model))).to(be_true)

    def test_marginals_compose(self, grid_structure):
        model = random_model(grid_structure, seed=2)
        direct = exact_marginal(model, (0, 4))
        staged = exact_marginal(model, (0, 1, 4, 8)).marginalize((0, 4))

        expect(direct.nodes).to(equal((0, 4)))
        expect(float(np.max(np.abs(direct.probabilities - staged.probabilities)))).to(be_below(1e-14))

    def test_independent_nodes_factorize(self):
        structure = pairwise_structure(UndirectedGraph(2))
        model = MrfModel.from_vector(structure, [0.3, -0.6])
        joint = exact_joint(model)
        first, second = joint.sum(axis=1), joint.sum(axis=0)

        expect(float(np.max(np.abs(joint - np.outer(first, second))))).to(be_below(1e-14))

    def test_conditional_slices_sum_to_one(self, grid_structure):
        conditional = exact_conditional(random_model(grid_structure, seed=3), 4, (1, 3, 4, 5))

        expect(conditional.variable).to(equal(4))
        expect(float(np.max(np.abs(conditional.probabilities.sum(axis=2) - 1.0)))).to(be_below(1e-12))

    def test_conditional_needs_its_node(self, grid_structure):
        model = random_model(grid_structure, seed=3)

        expect(lambda: exact_conditional(model, 0, (1, 3))).to(raise_error(GraphError))

    def test_single_edge_conditional_is_logistic(self):
        model = single_edge_model(0.9, unary=(-0.4, 0.2))
        conditional = exact_conditional(model, 0, (0, 1))

        expected = 1 / (1 + np.exp(-0.4 + 0.9))
        expect(abs(conditional.probabilities[1, 1] - expected)).to(be_below(1e-12))

    @pytest.mark.parametrize("node", [0, 4, 7])
    def test_markov_property(self, grid_structure, node):
        model = random_model(grid_structure, seed=6)
        blanket = sorted({node} | neighbors(grid_structure.graph, node))
        conditional = exact_conditional(model, node, blanket)
        x = [1, 0, 1, 1, 0, 0, 1, 0, 1]

        index = tuple(slice(None) if other == node else x[other] for other in blanket)
        expect(float(np.max(np.abs(conditional.probabilities[index] - site_conditional(model, node, x))))).to(
            be_below(1e-12)
        )

    def test_model_from_tables(self):
        g = UndirectedGraph(2, [(0, 1)])
        tables = [PotentialTable.from_free((0, 1), (2, 2), [1.0]), PotentialTable.from_free((0,), (2,), [2.0])]
        model = model_from_tables(g, (2, 2), tables)

        expect(model.cliques.cliques).to(equal(((0, 1), (0,))))
        expect(log_unnormalized(model, (1, 1))).to(equal(-3.0))


class TestDataset:
    def test_rejects_out_of_range_values(self):
        expect(lambda: dataset_from_rows([[0, 2]], (2, 2))).to(raise_error(PotentialError))

    def test_sufficient_statistics(self, grid_structure):
        row = [1, 0, 1, 1, 0, 0, 1, 0, 1]
        counts = sufficient_statistics(dataset_from_rows([row], grid_structure.cards), grid_structure.layout)

        expect(int(counts[(0,)][1])).to(equal(1))
        expect(int(counts[(0, 1)][1, 0])).to(equal(1))
        for table in counts.values():
            expect(int(table.sum())).to(equal(1))

    def test_empirical_distribution(self):
        d = dataset_from_rows([[0, 1], [0, 1], [1, 1], [0, 0]], (2, 2))
        table = empirical_distribution(d, (1,), cap=10)

        expect(table.probabilities.tolist()).to(equal([0.25, 0.75]))

    def test_empirical_distribution_cap(self):
        d = dataset_from_rows([[0, 1, 0]], (2, 2, 2))

        expect(lambda: empirical_distribution(d, (0, 1, 2), cap=4)).to(raise_error(EnumerationLimitError))

    def test_empirical_distribution_of_empty_dataset(self):
        d = Dataset(np.zeros((0, 2)), (2, 2))

        expect(lambda: empirical_distribution(d, (0,), cap=10)).to(raise_error(PotentialError))


class TestSampling:
    def test_exact_sampling_is_reproducible(self, grid_structure):
        model = random_model(grid_structure, seed=0)

        first = sample_exact(model, 50, seed=9)
        second = sample_exact(model, 50, seed=9)
        expect(np.array_equal(first.observations, second.observations)).to(be_true)

    def test_exact_sampling_of_a_near_deterministic_model(self):
        structure = pairwise_structure(UndirectedGraph(3))
        model = MrfModel.from_vector(structure, [50.0, 50.0, 50.0])

        expect(int(sample_exact(model, 100, seed=1).observations.sum())).to(equal(0))

    def test_exact_sampling_frequencies(self):
        model = single_edge_model(1.0, unary=(-0.5, 0.5))
        n = 100_000
        frequencies = empirical_distribution(sample_exact(model, n, seed=3), (0, 1), cap=10).probabilities
        joint = exact_joint(model)

        bound = 4 * np.sqrt(joint * (1 - joint) / n)
        expect(bool(np.all(np.abs(frequencies - joint) < bound))).to(be_true)

    def test_gibbs_is_reproducible(self, grid_structure):
        model = random_model(grid_structure, seed=0)

        first = sample_gibbs(model, 40, burn_in=20, thinning=2, seed=4, chains=2)
        second = sample_gibbs(model, 40, burn_in=20, thinning=2, seed=4, chains=2)
        expect(first.num_samples).to(equal(40))
        expect(np.array_equal(first.observations, second.observations)).to(be_true)

    def test_gibbs_frequencies_of_independent_nodes(self):
        structure = pairwise_structure(UndirectedGraph(2))
        model = MrfModel.from_vector(structure, [0.5, -1.0])
        n = 20_000

        d = sample_gibbs(model, n, burn_in=10, thinning=1, seed=2)
        expected = np.array([1 / (1 + np.exp(0.5)), 1 / (1 + np.exp(-1.0))])
        bound = 4 * np.sqrt(expected * (1 - expected) / n)
        expect(bool(np.all(np.abs(d.observations.mean(axis=0) - expected) < bound))).to(be_true)


class TestFiles:
    def test_model_round_trip(self, tmp_path, grid_structure):
        model = random_model(grid_structure, seed=8)
        path = tmp_path / "model.txt"

        write_model(path, model)
        loaded = read_model(path)

        expect(loaded.graph).to(equal(model.graph))
        expect(loaded.cliques).to(equal(model.cliques))
        expect(np.array_equal(loaded.params.values, model.params.values)).to(be_true)

    def test_graph_file_gives_pairwise_structure(self, tmp_path):
        path = tmp_path / "graph.txt"
        path.write_text("# a path\nnodes 3\nedge 0 1\nedge 1 2\n")

        structure = read_structure(path, default_card=3)

        expect(structure.cards).to(equal((3, 3, 3)))
        expect(structure.cliques.cliques).to(equal(((0,), (1,), (2,), (0, 1), (1, 2))))

    def test_graph_file_is_not_a_model(self, tmp_path):
        path = tmp_path / "graph.txt"
        path.write_text("nodes 2\nedge 0 1\n")

        expect(lambda: read_model(path)).to(raise_error(FormatError))

    def test_unknown_keyword_reports_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("nodes 2\nvertex 0 1\n")

        expect(lambda: read_structure(path)).to(raise_error(FormatError, f"{path}:2: unknown keyword 'vertex'"))

    def test_dataset_round_trip(self, tmp_path):
        d = dataset_from_rows([[0, 2, 1], [1, 0, 0]], (2, 3, 2))
        path = tmp_path / "data.txt"

        write_dataset(path, d)
        loaded = read_dataset(path, d.cards)

        expect(np.array_equal(loaded.observations, d.observations)).to(be_true)

    def test_dataset_cards_are_inferred(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("2 2\n0 2\n0 1\n")

        expect(read_dataset(path).cards).to(equal((2, 3)))

    def test_dataset_row_count_is_checked(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("3 2\n0 1\n")

        expect(lambda: read_dataset(path)).to(raise_error(FormatError))
