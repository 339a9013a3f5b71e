import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from laplab.exceptions import EnumerationLimitError, GraphError, PotentialError
from laplab.graph import Clique, CliqueSystem, UndirectedGraph
from laplab.potentials import ParamLayout, ParamVector, PotentialTable

from .distribution import ProbabilityTable

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 2**24


@dataclass(frozen=True)
class ModelStructure:
    """
    Everything about a model except its parameter values: the graph, the clique system that carries potentials and the
    per-node cardinalities.
    """

    graph: UndirectedGraph
    cliques: CliqueSystem
    cards: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cards", tuple(int(card) for card in self.cards))
        errors = self.check()
        if errors:
            raise GraphError("; ".join(errors))

    def check(self) -> List[str]:
        errors = []
        errors.extend(self._check_cards())
        errors.extend(self._check_cliques())
        return errors

    def _check_cards(self) -> List[str]:
        errors = []
        if len(self.cards) != self.graph.num_nodes:
            errors.append(f"expected {self.graph.num_nodes} cardinalities, got {len(self.cards)}")
        if any(card < 2 for card in self.cards):
            errors.append("every node needs at least 2 states")
        return errors

    def _check_cliques(self) -> List[str]:
        errors = []
        for clique in self.cliques:
            if clique[-1] >= self.graph.num_nodes:
                errors.append(f"clique {clique} refers to a node outside the graph")
                continue
            missing = [pair for pair in combinations(clique, 2) if not self.graph.has_edge(*pair)]
            if missing:
                errors.append(f"clique {clique} is not fully connected (missing {missing})")
        return errors

    @classmethod
    def pairwise(cls, graph: UndirectedGraph, cards: Sequence[int], unary: bool = True) -> "ModelStructure":
        """
        The structure with one potential per edge and, when `unary` is set, one per node (unary cliques first).
        """

        cliques = [(node,) for node in graph.nodes] if unary else []
        cliques.extend(graph.sorted_edges)
        return cls(graph, CliqueSystem(tuple(cliques)), tuple(cards))

    @cached_property
    def layout(self) -> ParamLayout:
        return ParamLayout(self.cliques.cliques, self.cards)

    @property
    def dimension(self) -> int:
        return self.layout.dimension

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @property
    def num_states(self) -> int:
        return int(np.prod(self.cards, dtype=object)) if self.cards else 1


@dataclass(frozen=True, eq=False)
class MrfModel:
    """
    A discrete Markov random field: a Gibbs density exp(-sum_c E(x_c)) / Z with one normalized table per clique.
    """

    graph: UndirectedGraph
    cliques: CliqueSystem
    cards: Tuple[int, ...]
    tables: Tuple[PotentialTable, ...]

    def __post_init__(self):
        object.__setattr__(self, "cards", tuple(int(card) for card in self.cards))
        object.__setattr__(self, "tables", tuple(self.tables))
        errors = self.structure.check() + self._check_tables()
        if errors:
            raise PotentialError("; ".join(errors))

    def _check_tables(self) -> List[str]:
        errors = []
        if len(self.tables) != len(self.cliques):
            errors.append(f"expected one table per clique ({len(self.cliques)}), got {len(self.tables)}")
        for clique, table in zip(self.cliques, self.tables):
            if table.scope != clique:
                errors.append(f"table scope {table.scope} does not match clique {clique}")
            elif table.cards != tuple(self.cards[node] for node in clique):
                errors.append(f"table for {clique} disagrees with the node cardinalities")
        return errors

    @classmethod
    def from_vector(cls, structure: ModelStructure, values: Sequence[float]) -> "MrfModel":
        vector = ParamVector(structure.layout, np.asarray(values, dtype=float))
        return cls(structure.graph, structure.cliques, structure.cards, tuple(vector.tables()))

    @cached_property
    def structure(self) -> ModelStructure:
        return ModelStructure(self.graph, self.cliques, self.cards)

    @property
    def layout(self) -> ParamLayout:
        return self.structure.layout

    @cached_property
    def params(self) -> ParamVector:
        values = np.concatenate([table.free_values() for table in self.tables]) if self.tables else np.zeros(0)
        return ParamVector(self.layout, values)

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @property
    def num_states(self) -> int:
        return self.structure.num_states

    def table(self, clique: Clique) -> PotentialTable:
        return self.tables[self.cliques.index(clique)]

    def tables_containing(self, node: int) -> List[PotentialTable]:
        return [table for table in self.tables if node in table.scope]


def _validate_configuration(m: MrfModel, x: Sequence[int]) -> Tuple[int, ...]:
    config = tuple(int(state) for state in x)
    if len(config) != m.num_nodes:
        raise PotentialError(f"Expected a configuration of {m.num_nodes} states, got {len(config)}")
    for node, (state, card) in enumerate(zip(config, m.cards)):
        if not 0 <= state < card:
            raise PotentialError(f"State {state} of node {node} is outside 0..{card - 1}")
    return config


def _validate_domain(m: MrfModel, A: Iterable[int]) -> Tuple[int, ...]:
    domain = tuple(sorted(m.graph.validate_nodes(A)))
    if not domain:
        raise GraphError("The node set must not be empty")
    return domain


def _check_cap(m: MrfModel, cap: int):
    if m.num_states > cap:
        raise EnumerationLimitError(f"Model has {m.num_states} joint states, above the enumeration cap of {cap}")


def log_unnormalized(m: MrfModel, x: Sequence[int]) -> float:
    config = _validate_configuration(m, x)
    return -sum(table.energy(tuple(config[node] for node in table.scope)) for table in m.tables)


def log_joint_tensor(m: MrfModel, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """
    Unnormalized log-probabilities of every joint state, one axis per node.
    """

    _check_cap(m, cap)
    return m.layout.log_tensor(m.params.values, tuple(m.graph.nodes))


def partition_function(m: MrfModel, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """
    log Z, computed by exhaustive enumeration with a max shift.
    """

    return float(logsumexp(log_joint_tensor(m, cap)))


def exact_joint(m: MrfModel, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    log_u = log_joint_tensor(m, cap)
    return np.exp(log_u - logsumexp(log_u))


def exact_marginal(m: MrfModel, A: Iterable[int], cap: int = DEFAULT_ENUMERATION_CAP) -> ProbabilityTable:
    domain = _validate_domain(m, A)
    joint = exact_joint(m, cap)
    summed = tuple(node for node in m.graph.nodes if node not in domain)
    return ProbabilityTable(domain, joint.sum(axis=summed) if summed else joint)


def exact_conditional(
    m: MrfModel, j: int, A: Iterable[int], cap: int = DEFAULT_ENUMERATION_CAP
) -> ProbabilityTable:
    """
    p(x_j | x_{A \\ {j}}) as a table over A in which every slice along j's axis sums to 1.
    """

    domain = _validate_domain(m, A)
    if j not in domain:
        raise GraphError(f"Node {j} is not part of the node set {domain}")
    return exact_marginal(m, domain, cap).conditional(j)


def site_conditional(m: MrfModel, j: int, x: Sequence[int]) -> np.ndarray:
    """
    p(x_j | x_{-j}) for the states in `x`, computed from the tables containing j only (the Markov blanket).
    """

    config = list(_validate_configuration(m, x))
    m.graph.validate_node(j)
    logits = np.zeros(m.cards[j])
    for table in m.tables_containing(j):
        index = tuple(slice(None) if node == j else config[node] for node in table.scope)
        logits -= table.energies[index]
    return np.exp(logits - logsumexp(logits))


def model_from_tables(
    graph: UndirectedGraph,
    cards: Sequence[int],
    tables: Sequence[PotentialTable],
    cliques: Optional[CliqueSystem] = None,
) -> MrfModel:
    cliques = cliques or CliqueSystem(tuple(table.scope for table in tables))
    by_scope = {table.scope: table for table in tables}
    return MrfModel(graph, cliques, tuple(cards), tuple(by_scope[clique] for clique in cliques))
