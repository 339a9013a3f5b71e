from typing import Optional, Sequence

import numpy as np

from laplab.graph import UndirectedGraph, grid_graph
from laplab.model import ModelStructure, MrfModel
from laplab.util import make_stream

# the 1-neighbourhood of the bottom-left edge (7, 8) of the numbered grid
FIGURE_DOMAIN = (4, 5, 7, 8, 9)


def figure_graph() -> UndirectedGraph:
    """
    The 3x3 grid with its nodes numbered 1..9 row by row. Node 0 exists but has no edges, so node ids match the usual
    drawing of the grid.
    """

    return UndirectedGraph(10, [(i + 1, j + 1) for i, j in grid_graph(3, 3).edges])


def pairwise_structure(graph: UndirectedGraph, card: int = 2) -> ModelStructure:
    return ModelStructure.pairwise(graph, (card,) * graph.num_nodes)


def random_model(structure: ModelStructure, seed: int, width: float = 1.0) -> MrfModel:
    values = make_stream(seed, "test-model").uniform(-width, width, size=structure.dimension)
    return MrfModel.from_vector(structure, values)


def zero_field_model(structure: ModelStructure, coupling: float = 3.0) -> MrfModel:
    """
    A binary pairwise model with every edge energy equal to `coupling` and unary energies chosen so that, in +-1 spin
    terms, no node feels an external field. Correlations then travel far along the graph.
    """

    values = {}
    for clique in structure.cliques:
        if len(clique) == 1:
            values[clique] = [-coupling * len(structure.graph.adjacency[clique[0]]) / 2]
        else:
            values[clique] = [coupling]
    return MrfModel.from_vector(structure, np.concatenate([values[clique] for clique in structure.cliques]))


def random_graph(num_nodes: int, density: float, rng: np.random.Generator) -> UndirectedGraph:
    edges = [(i, j) for i in range(num_nodes) for j in range(i + 1, num_nodes) if rng.random() < density]
    return UndirectedGraph(num_nodes, edges)


def random_domain(num_nodes: int, rng: np.random.Generator, size: Optional[int] = None) -> Sequence[int]:
    size = size or int(rng.integers(1, num_nodes + 1))
    return tuple(sorted(int(node) for node in rng.choice(num_nodes, size=size, replace=False)))
