from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

import networkx as nx

from laplab.exceptions import GraphError

Edge = Tuple[int, int]
Clique = Tuple[int, ...]
NodeSet = FrozenSet[int]


def make_clique(nodes: Iterable[int]) -> Clique:
    """
    Returns the canonical (ascending, duplicate-free) representation of a clique.
    """

    clique = tuple(sorted(set(int(node) for node in nodes)))
    if not clique:
        raise GraphError("A clique must contain at least one node")
    return clique


def _normalize_edge(edge: Sequence[int]) -> Edge:
    i, j = (int(node) for node in edge)
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class UndirectedGraph:
    """
    An immutable undirected graph over the nodes 0..num_nodes-1.

    Edges may be passed in any orientation and as any iterable; they are stored as a frozenset of (low, high) pairs.
    """

    num_nodes: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        # frozen dataclasses need object.__setattr__ to normalize their own fields
        raw_edges = list(self.edges)
        object.__setattr__(self, "edges", frozenset(_normalize_edge(edge) for edge in raw_edges))

        errors = self.check(raw_edges)
        if errors:
            raise GraphError("; ".join(errors))

    def check(self, raw_edges: Sequence[Sequence[int]] = ()) -> List[str]:
        errors = []
        errors.extend(self._check_num_nodes())
        errors.extend(self._check_edges(raw_edges))
        return errors

    def _check_num_nodes(self) -> List[str]:
        if self.num_nodes < 0:
            return [f"num_nodes must be non-negative, got {self.num_nodes}"]
        return []

    def _check_edges(self, raw_edges: Sequence[Sequence[int]]) -> List[str]:
        errors = []
        for i, j in self.edges:
            if i == j:
                errors.append(f"self-loop on node {i}")
            if i < 0 or j >= self.num_nodes:
                errors.append(f"edge ({i}, {j}) has an endpoint outside 0..{self.num_nodes - 1}")
        if len(raw_edges) != len(self.edges):
            errors.append("each node pair may appear at most once")
        return errors

    @property
    def nodes(self) -> range:
        return range(self.num_nodes)

    @cached_property
    def adjacency(self) -> Tuple[NodeSet, ...]:
        neighbours: List[set] = [set() for _ in range(self.num_nodes)]
        for i, j in self.edges:
            neighbours[i].add(j)
            neighbours[j].add(i)
        return tuple(frozenset(nodes) for nodes in neighbours)

    @cached_property
    def sorted_edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def has_edge(self, i: int, j: int) -> bool:
        return _normalize_edge((i, j)) in self.edges

    def validate_node(self, node: int) -> int:
        if not 0 <= node < self.num_nodes:
            raise GraphError(f"Node {node} is outside 0..{self.num_nodes - 1}")
        return node

    def validate_nodes(self, nodes: Iterable[int]) -> NodeSet:
        return frozenset(self.validate_node(int(node)) for node in nodes)

    def subgraph_edges(self, nodes: Iterable[int]) -> FrozenSet[Edge]:
        """
        Edges with both endpoints in `nodes`.
        """

        members = frozenset(nodes)
        return frozenset(edge for edge in self.edges if edge[0] in members and edge[1] in members)

    def to_networkx(self, nodes: Iterable[int] = None) -> nx.Graph:
        graph = nx.Graph()
        members = self.nodes if nodes is None else sorted(nodes)
        graph.add_nodes_from(members)
        graph.add_edges_from(self.sorted_edges if nodes is None else sorted(self.subgraph_edges(members)))
        return graph

    def relabel(self, nodes: Sequence[int]) -> Tuple["UndirectedGraph", Dict[int, int]]:
        """
        Returns the subgraph on `nodes` relabeled to 0..len(nodes)-1 (in ascending order of the original ids), along
        with the mapping from original to new ids.
        """

        ordered = sorted(set(nodes))
        mapping = {node: index for index, node in enumerate(ordered)}
        edges = [(mapping[i], mapping[j]) for i, j in self.subgraph_edges(ordered)]
        return UndirectedGraph(len(ordered), edges), mapping


@dataclass(frozen=True)
class CliqueSystem:
    """
    An ordered, duplicate-free collection of cliques in canonical form.
    """

    cliques: Tuple[Clique, ...] = ()

    def __post_init__(self):
        canonical = [make_clique(clique) for clique in self.cliques]
        if len(set(canonical)) != len(canonical):
            raise GraphError("A clique system may not list the same clique twice")
        object.__setattr__(self, "cliques", tuple(canonical))

    def __iter__(self) -> Iterator[Clique]:
        return iter(self.cliques)

    def __len__(self) -> int:
        return len(self.cliques)

    def __getitem__(self, index: int) -> Clique:
        return self.cliques[index]

    def __contains__(self, clique: object) -> bool:
        return clique in self._positions

    @cached_property
    def _positions(self) -> Dict[Clique, int]:
        return {clique: position for position, clique in enumerate(self.cliques)}

    def index(self, clique: Clique) -> int:
        try:
            return self._positions[clique]
        except KeyError:
            raise GraphError(f"Clique {clique} is not part of the clique system")

    @cached_property
    def nodes(self) -> NodeSet:
        return frozenset(node for clique in self.cliques for node in clique)

    def covers(self, nodes: Iterable[int]) -> bool:
        """
        True when some clique of the system contains every node in `nodes`.
        """

        members = frozenset(nodes)
        return any(members <= frozenset(clique) for clique in self.cliques)

    def maximal(self) -> "CliqueSystem":
        """
        The cliques of the system that are not strictly contained in another clique of the system, in system order.
        """

        sets = [frozenset(clique) for clique in self.cliques]
        return CliqueSystem(
            tuple(clique for clique, members in zip(self.cliques, sets) if not any(members < other for other in sets))
        )


def neighbors(g: UndirectedGraph, j: int) -> NodeSet:
    return g.adjacency[g.validate_node(j)]
