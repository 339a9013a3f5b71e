from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from laplab.exceptions import EnumerationLimitError, PotentialError
from laplab.graph import Clique
from laplab.potentials import ParamLayout

from .distribution import ProbabilityTable


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    N complete observations of all M variables, one row per sample.
    """

    observations: np.ndarray
    cards: Tuple[int, ...]

    def __post_init__(self):
        observations = np.array(self.observations, dtype=np.int64)
        if observations.ndim == 1 and observations.size == 0:
            observations = observations.reshape(0, len(self.cards))
        observations.setflags(write=False)
        object.__setattr__(self, "observations", observations)
        object.__setattr__(self, "cards", tuple(int(card) for card in self.cards))

        errors = self.check()
        if errors:
            raise PotentialError("Invalid dataset: " + "; ".join(errors))

    def check(self) -> List[str]:
        errors = []
        if self.observations.ndim != 2:
            return [f"observations must be a 2-d array, got {self.observations.ndim} dimensions"]
        if self.observations.shape[1] != len(self.cards):
            errors.append(f"rows have {self.observations.shape[1]} values for {len(self.cards)} variables")
            return errors
        if self.observations.size:
            if np.any(self.observations < 0) or np.any(self.observations >= np.asarray(self.cards)):
                errors.append("every value must lie in 0..K-1 for its variable")
        return errors

    @property
    def num_samples(self) -> int:
        return int(self.observations.shape[0])

    @property
    def num_variables(self) -> int:
        return int(self.observations.shape[1])

    def head(self, n: int) -> "Dataset":
        return Dataset(self.observations[:n], self.cards)


def sufficient_statistics(d: Dataset, layout: ParamLayout) -> Dict[Clique, np.ndarray]:
    """
    Counts of every joint configuration of every clique of `layout` across the samples, as full tables over the clique.
    """

    if tuple(layout.cards) != d.cards:
        raise PotentialError("Dataset cardinalities do not match the parameter layout")

    counts = {}
    for scope in layout.scopes:
        shape = layout.scope_cards(scope)
        flat = np.ravel_multi_index(tuple(d.observations[:, node] for node in scope), shape)
        counts[scope] = np.bincount(flat, minlength=int(np.prod(shape))).reshape(shape)
    return counts


def empirical_distribution(d: Dataset, nodes: Iterable[int], cap: int) -> ProbabilityTable:
    """
    The empirical distribution of the samples restricted to `nodes`: a histogram over their joint states.
    """

    nodes = tuple(sorted(set(int(node) for node in nodes)))
    if d.num_samples == 0:
        raise PotentialError("Cannot build an empirical distribution from an empty dataset")
    shape = tuple(d.cards[node] for node in nodes)
    size = int(np.prod(shape, dtype=object))
    if size > cap:
        raise EnumerationLimitError(f"Domain {nodes} has {size} joint states, above the enumeration cap of {cap}")

    flat = np.ravel_multi_index(tuple(d.observations[:, node] for node in nodes), shape)
    counts = np.bincount(flat, minlength=size).reshape(shape)
    return ProbabilityTable(nodes, counts / d.num_samples)


def dataset_from_rows(rows: Sequence[Sequence[int]], cards: Sequence[int]) -> Dataset:
    return Dataset(np.asarray(rows, dtype=np.int64).reshape(len(rows), len(cards)), tuple(cards))
