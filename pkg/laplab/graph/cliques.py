import logging
from itertools import combinations, islice
from typing import FrozenSet, Iterable, List

import networkx as nx

from laplab.exceptions import CliqueLimitError, GraphError

from .undirected_graph import Clique, CliqueSystem, Edge, NodeSet, UndirectedGraph, make_clique, neighbors

logger = logging.getLogger(__name__)

DEFAULT_CLIQUE_CAP = 10**6


def maximal_cliques(g: UndirectedGraph, cap: int = DEFAULT_CLIQUE_CAP) -> CliqueSystem:
    """
    All maximal cliques of `g` in lexicographic order of their canonical node lists. Isolated nodes form singleton
    cliques.
    """

    return _maximal_cliques_on(g.nodes, g.edges, cap)


def _maximal_cliques_on(nodes: Iterable[int], edges: Iterable[Edge], cap: int = DEFAULT_CLIQUE_CAP) -> CliqueSystem:
    graph = nx.Graph()
    graph.add_nodes_from(sorted(nodes))
    graph.add_edges_from(sorted(edges))

    # find_cliques is the pivoting Bron-Kerbosch variant; islice stops the enumeration one past the cap so the cap is
    # enforced without materializing an intractable number of cliques
    found = list(islice(nx.find_cliques(graph), cap + 1))
    if len(found) > cap:
        raise CliqueLimitError(f"Graph has more than {cap} maximal cliques")

    logger.debug("enumerated %d maximal cliques on %d nodes", len(found), graph.number_of_nodes())
    return CliqueSystem(tuple(sorted(make_clique(clique) for clique in found)))


def clique_closure(cliques: Iterable[Clique]) -> CliqueSystem:
    """
    Every nonempty subset of every clique, ordered by size and then lexicographically.

    A normalized potential table for each of these subsets spans exactly the Gibbs distributions that factorize over
    the given cliques.
    """

    subsets = set()
    for clique in cliques:
        for size in range(1, len(clique) + 1):
            subsets.update(combinations(clique, size))
    return CliqueSystem(tuple(sorted(subsets, key=lambda subset: (len(subset), subset))))


def one_neighbourhood(cliques: CliqueSystem, q: Iterable[int]) -> NodeSet:
    """
    A_q: the union of every clique of the system that shares a node with q.
    """

    members = frozenset(q)
    if not members or not cliques.covers(members):
        raise GraphError(f"Clique {tuple(sorted(members))} is not covered by the clique system")

    neighbourhood = set(members)
    for clique in cliques:
        if members.intersection(clique):
            neighbourhood.update(clique)
    return frozenset(neighbourhood)


def one_node_neighbourhood(g: UndirectedGraph, q: Iterable[int], j: int) -> NodeSet:
    """
    q together with the neighbours of one of its nodes j.
    """

    members = g.validate_nodes(q)
    if j not in members:
        raise GraphError(f"Node {j} is not part of clique {tuple(sorted(members))}")
    return members | neighbors(g, j)


def sub_cliques(cliques: CliqueSystem, nodes: Iterable[int]) -> List[Clique]:
    """
    The cliques of the system that lie entirely within `nodes`, in system order.
    """

    members: FrozenSet[int] = frozenset(nodes)
    return [clique for clique in cliques if members.issuperset(clique)]
