from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from laplab.exceptions import PotentialError
from laplab.graph import Clique, make_clique

from .potential_table import PotentialTable, free_index


@dataclass(frozen=True)
class ParamLayout:
    """
    Maps the free entries of a list of normalized tables onto positions of a flat parameter vector.

    Cliques are laid out in the order given by `scopes`; within a clique, entries follow row-major order over the
    states >= 1. `cards` holds the cardinality of every node of the model, indexed by node id.
    """

    scopes: Tuple[Clique, ...]
    cards: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "scopes", tuple(make_clique(scope) for scope in self.scopes))
        object.__setattr__(self, "cards", tuple(int(card) for card in self.cards))

        errors = self.check()
        if errors:
            raise PotentialError("; ".join(errors))

    def check(self) -> List[str]:
        errors = []
        if len(set(self.scopes)) != len(self.scopes):
            errors.append("a clique may appear only once in a parameter layout")
        for scope in self.scopes:
            if scope[-1] >= len(self.cards) or scope[0] < 0:
                errors.append(f"clique {scope} refers to a node without a cardinality")
        if any(card < 2 for card in self.cards):
            errors.append("cardinalities must be at least 2")
        return errors

    @cached_property
    def offsets(self) -> Tuple[int, ...]:
        sizes = [self.free_size(scope) for scope in self.scopes]
        return tuple(int(offset) for offset in np.concatenate([[0], np.cumsum(sizes, dtype=int)]))

    @property
    def dimension(self) -> int:
        return self.offsets[-1]

    @cached_property
    def _positions(self) -> Dict[Clique, int]:
        return {scope: position for position, scope in enumerate(self.scopes)}

    def __contains__(self, clique: object) -> bool:
        return clique in self._positions

    def scope_cards(self, clique: Clique) -> Tuple[int, ...]:
        return tuple(self.cards[node] for node in clique)

    def free_shape(self, clique: Clique) -> Tuple[int, ...]:
        return tuple(card - 1 for card in self.scope_cards(clique))

    def free_size(self, clique: Clique) -> int:
        return int(np.prod(self.free_shape(clique)))

    def slice_of(self, clique: Clique) -> slice:
        try:
            position = self._positions[clique]
        except KeyError:
            raise PotentialError(f"Clique {clique} is not part of the layout")
        return slice(self.offsets[position], self.offsets[position + 1])

    def index_of(self, clique: Clique, config: Sequence[int]) -> int:
        """
        Position of the free entry `config` (all coordinates >= 1) of `clique`.
        """

        shape = self.free_shape(clique)
        shifted = tuple(int(state) - 1 for state in config)
        if len(shifted) != len(shape) or any(not 0 <= s < k for s, k in zip(shifted, shape)):
            raise PotentialError(f"Configuration {tuple(config)} is not a free entry of clique {clique}")
        return self.slice_of(clique).start + int(np.ravel_multi_index(shifted, shape))

    def entries(self) -> List[Tuple[Clique, Tuple[int, ...]]]:
        """
        The inverse of `index_of`: (clique, configuration) for every position, in position order.
        """

        return [
            (scope, tuple(state + 1 for state in config))
            for scope in self.scopes
            for config in product(*(range(size) for size in self.free_shape(scope)))
        ]

    def log_tensor(self, values: np.ndarray, nodes: Sequence[int]) -> np.ndarray:
        """
        The unnormalized log-probability -sum_c E(x_c) over the joint states of `nodes` (ascending node ids), one axis
        per node.
        """

        nodes = tuple(nodes)
        values = self._validate(values)
        members = frozenset(nodes)
        shape = tuple(self.cards[node] for node in nodes)

        tensor = np.zeros(shape)
        for scope, offset, end in zip(self.scopes, self.offsets, self.offsets[1:]):
            if not members.issuperset(scope):
                raise PotentialError(f"Clique {scope} is not contained in the node set {nodes}")
            table = np.zeros(self.scope_cards(scope))
            table[free_index(len(scope))] = values[offset:end].reshape(self.free_shape(scope))
            # nodes and scopes are both ascending, so a plain reshape lines the scope axes up with the tensor axes
            tensor -= table.reshape([self.cards[node] if node in scope else 1 for node in nodes])
        return tensor

    def expectations(self, weights: np.ndarray, nodes: Sequence[int]) -> np.ndarray:
        """
        For every free entry (c, y), the total weight of the joint states of `nodes` with x_c = y.

        With a probability tensor this is the vector of expected sufficient statistics.
        """

        nodes = tuple(nodes)
        axis_of = {node: axis for axis, node in enumerate(nodes)}
        result = np.empty(self.dimension)
        for scope, offset, end in zip(self.scopes, self.offsets, self.offsets[1:]):
            other_axes = tuple(axis for node, axis in axis_of.items() if node not in scope)
            marginal = weights.sum(axis=other_axes) if other_axes else weights
            result[offset:end] = marginal[free_index(len(scope))].ravel()
        return result

    def feature_matrix(self, nodes: Sequence[int]) -> np.ndarray:
        """
        The 0/1 indicator of every free entry (columns) at every joint state of `nodes` (rows, row-major order).
        """

        nodes = tuple(nodes)
        axis_of = {node: axis for axis, node in enumerate(nodes)}
        states = np.indices(tuple(self.cards[node] for node in nodes)).reshape(len(nodes), -1)

        features = np.zeros((states.shape[1], self.dimension))
        for scope, offset in zip(self.scopes, self.offsets):
            scope_states = states[[axis_of[node] for node in scope]]
            free = np.all(scope_states >= 1, axis=0)
            columns = np.ravel_multi_index(tuple(scope_states[:, free] - 1), self.free_shape(scope))
            features[np.flatnonzero(free), offset + columns] = 1.0
        return features

    def _validate(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if values.shape != (self.dimension,):
            raise PotentialError(f"Expected a parameter vector of length {self.dimension}, got shape {values.shape}")
        return values


@dataclass(frozen=True, eq=False)
class ParamVector:
    """
    A flat parameter vector together with the layout that gives its entries meaning.
    """

    layout: ParamLayout
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.layout._validate(self.values), dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, layout: ParamLayout) -> "ParamVector":
        return cls(layout, np.zeros(layout.dimension))

    @classmethod
    def from_cliques(cls, layout: ParamLayout, values: Mapping[Clique, np.ndarray]) -> "ParamVector":
        """
        Embeds per-clique values into the layout; cliques that are not listed get exact zeros.
        """

        vector = np.zeros(layout.dimension)
        for clique, clique_values in values.items():
            vector[layout.slice_of(clique)] = clique_values
        return cls(layout, vector)

    @property
    def index_map(self) -> Dict[Tuple[Clique, Tuple[int, ...]], int]:
        return {entry: position for position, entry in enumerate(self.layout.entries())}

    def clique_values(self, clique: Clique) -> np.ndarray:
        return self.values[self.layout.slice_of(clique)]

    def table(self, clique: Clique) -> PotentialTable:
        return PotentialTable.from_free(clique, self.layout.scope_cards(clique), self.clique_values(clique))

    def tables(self) -> List[PotentialTable]:
        return [self.table(scope) for scope in self.layout.scopes]


def pack(tables: Sequence[PotentialTable], cards: Optional[Sequence[int]] = None) -> ParamVector:
    """
    Packs the free entries of `tables` into a ParamVector, cliques in the given order.

    When `cards` is omitted the node cardinalities are read from the tables, which must then mention every node.
    """

    if cards is None:
        known: Dict[int, int] = {}
        for table in tables:
            known.update(zip(table.scope, table.cards))
        num_nodes = max(known) + 1 if known else 0
        missing = [node for node in range(num_nodes) if node not in known]
        if missing:
            raise PotentialError(f"No cardinality known for nodes {missing}; pass cards explicitly")
        cards = [known[node] for node in range(num_nodes)]

    layout = ParamLayout(tuple(table.scope for table in tables), tuple(cards))
    for table in tables:
        if layout.scope_cards(table.scope) != table.cards:
            raise PotentialError(f"Table for {table.scope} disagrees with the node cardinalities")

    values = np.concatenate([table.free_values() for table in tables]) if tables else np.zeros(0)
    return ParamVector(layout, values)


def unpack(values: np.ndarray, layout: ParamLayout) -> List[PotentialTable]:
    return ParamVector(layout, values).tables()
