from .cliques import (
    DEFAULT_CLIQUE_CAP,
    clique_closure,
    maximal_cliques,
    one_neighbourhood,
    one_node_neighbourhood,
    sub_cliques,
)
from .connectivity import (
    conditional_support,
    induced_edges,
    induced_graph,
    marginal_clique_system,
    outside_boundaries,
    preserves_potential,
    relative_path_connected,
    strong_lap_satisfied,
)
from .families import bipartite_graph, complete_graph, grid_graph
from .undirected_graph import Clique, CliqueSystem, Edge, NodeSet, UndirectedGraph, make_clique, neighbors
