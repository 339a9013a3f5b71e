"""
Path connectivity relative to a node set A, and the structural conditions built on it.

Two nodes i, j of A are path connected with respect to V \\ A when some path i, s1, ..., sn, j with n >= 1 runs entirely
through nodes outside A. Summing the variables outside A out of a Gibbs distribution couples exactly those pairs, which
is what makes the marginal over A carry potentials that the joint does not have.
"""
import logging
from collections import deque
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

import networkx as nx

from laplab.exceptions import GraphError

from .cliques import DEFAULT_CLIQUE_CAP, _maximal_cliques_on
from .undirected_graph import Clique, CliqueSystem, Edge, NodeSet, UndirectedGraph, make_clique, neighbors

logger = logging.getLogger(__name__)


def _validate_domain(g: UndirectedGraph, A: Iterable[int]) -> NodeSet:
    domain = g.validate_nodes(A)
    if not domain:
        raise GraphError("The domain A must not be empty")
    return domain


def _reachable_through_outside(g: UndirectedGraph, domain: NodeSet, i: int) -> NodeSet:
    """
    The nodes of `domain` reachable from i by a path whose interior (at least one node) avoids `domain`.

    Breadth-first search restricted to V \\ A, seeded with the outside neighbours of i.
    """

    adjacency = g.adjacency
    seen: Set[int] = {node for node in adjacency[i] if node not in domain}
    queue = deque(seen)
    reached: Set[int] = set()
    while queue:
        node = queue.popleft()
        for other in adjacency[node]:
            if other in domain:
                reached.add(other)
            elif other not in seen:
                seen.add(other)
                queue.append(other)

    # i itself is reachable when some external path loops back to it; that is not a pair
    reached.discard(i)
    return frozenset(reached)


def relative_path_connected(g: UndirectedGraph, A: Iterable[int], i: int, j: int) -> bool:
    domain = _validate_domain(g, A)
    if i not in domain or j not in domain:
        raise GraphError(f"Both nodes must belong to A, got ({i}, {j})")
    if i == j:
        raise GraphError("Relative path connectivity is defined for two distinct nodes")

    return j in _reachable_through_outside(g, domain, i)


def induced_edges(g: UndirectedGraph, A: Iterable[int]) -> FrozenSet[Edge]:
    """
    The pairs of A (in original node ids) that are path connected with respect to V \\ A.
    """

    domain = _validate_domain(g, A)
    edges = set()
    for i in sorted(domain):
        for j in _reachable_through_outside(g, domain, i):
            edges.add((i, j) if i < j else (j, i))
    return frozenset(edges)


def induced_graph(g: UndirectedGraph, A: Iterable[int]) -> UndirectedGraph:
    """
    The graph on A, relabeled to 0..|A|-1 in ascending order of the original ids, whose edges are exactly the pairs
    that are path connected with respect to V \\ A.

    Parameter values never cancel an induced edge here: every path-connected pair is assumed to be coupled by the
    marginal.
    """

    domain = sorted(_validate_domain(g, A))
    mapping = {node: index for index, node in enumerate(domain)}
    return UndirectedGraph(len(domain), [(mapping[i], mapping[j]) for i, j in induced_edges(g, domain)])


def marginal_clique_system(
    g: UndirectedGraph,
    cliques: CliqueSystem,
    A: Iterable[int],
    induced: bool = True,
    cap: int = DEFAULT_CLIQUE_CAP,
) -> CliqueSystem:
    """
    The maximal cliques of the graph on A formed by the edges internal to A and, when `induced` is set, the edges
    induced by summing out V \\ A. This is the clique structure of the marginal distribution over A.

    With `induced=False` the result is the structure of a deliberately mis-specified auxiliary model that ignores the
    couplings created by marginalization.
    """

    domain = _validate_domain(g, A)
    edges = set(g.subgraph_edges(domain))
    for clique in cliques:
        inside = sorted(domain.intersection(clique))
        edges.update(combinations(inside, 2))
    if induced:
        edges.update(induced_edges(g, domain))
    return _maximal_cliques_on(domain, edges, cap)


def strong_lap_satisfied(g: UndirectedGraph, A: Iterable[int], q: Iterable[int]) -> bool:
    """
    True when some pair of distinct nodes of q is path disconnected with respect to V \\ A.

    Singleton cliques satisfy the condition vacuously.
    """

    domain = _validate_domain(g, A)
    clique = make_clique(q)
    if not domain.issuperset(clique):
        raise GraphError(f"Clique {clique} is not contained in the domain")

    if len(clique) == 1:
        return True

    reach: Dict[int, NodeSet] = {}
    for i, j in combinations(clique, 2):
        if i not in reach:
            reach[i] = _reachable_through_outside(g, domain, i)
        if j not in reach[i]:
            return True
    return False


def preserves_potential(g: UndirectedGraph, A: Iterable[int], c: Iterable[int]) -> bool:
    """
    True when the marginal over A is guaranteed to carry the same normalized potential for c as the joint.

    For cliques of two or more nodes this is the Strong LAP condition. A singleton {k} additionally needs every
    neighbour of k inside A: summing out a neighbour of k folds a term depending on x_k alone into k's unary potential.
    """

    domain = _validate_domain(g, A)
    clique = make_clique(c)
    if len(clique) > 1:
        return strong_lap_satisfied(g, domain, clique)

    if clique[0] not in domain:
        raise GraphError(f"Clique {clique} is not contained in the domain")
    return neighbors(g, clique[0]) <= domain


def outside_boundaries(g: UndirectedGraph, A: Iterable[int]) -> List[Tuple[NodeSet, Clique]]:
    """
    The connected components of the subgraph on V \\ A, each paired with its boundary: the nodes of A adjacent to the
    component. Summing a component out produces one factor over its boundary, in ascending order of component.
    """

    domain = _validate_domain(g, A)
    outside = [node for node in g.nodes if node not in domain]
    components = nx.connected_components(g.to_networkx(outside)) if outside else []

    result = []
    for component in components:
        boundary = set()
        for node in component:
            boundary.update(g.adjacency[node] & domain)
        result.append((frozenset(component), tuple(sorted(boundary))))
    return sorted(result, key=lambda item: min(item[0]))


def conditional_support(g: UndirectedGraph, cliques: CliqueSystem, A: Iterable[int], j: int) -> CliqueSystem:
    """
    The cliques that can carry a nonzero normalized potential in p(x_j | x_{A \\ {j}}).

    Potentials not containing j cancel between numerator and denominator. What remains are the model cliques containing
    j that lie inside A, plus every subset containing j of the boundary of each outside component adjacent to j.
    """

    domain = _validate_domain(g, A)
    if j not in domain:
        raise GraphError(f"Node {j} is not part of the domain")

    support = {clique for clique in cliques if j in clique and domain.issuperset(clique)}
    for _, boundary in outside_boundaries(g, domain):
        if j not in boundary:
            continue
        others = [node for node in boundary if node != j]
        for size in range(len(others) + 1):
            for subset in combinations(others, size):
                support.add(make_clique((j,) + subset))

    return CliqueSystem(tuple(sorted(support, key=lambda clique: (len(clique), clique))))
