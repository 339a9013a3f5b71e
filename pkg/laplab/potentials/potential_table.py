from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from laplab.exceptions import PotentialError
from laplab.graph import Clique


def free_index(ndim: int) -> Tuple[slice, ...]:
    """
    Index selecting the free entries of a normalized table: the configurations whose coordinates are all >= 1.
    """

    return (slice(1, None),) * ndim


@dataclass(frozen=True, eq=False)
class PotentialTable:
    """
    The energy E(x_c) of one clique, stored as a dense table over the joint states of its scope.

    Tables are normalized with respect to zero: every entry whose configuration has at least one coordinate in state 0
    is exactly 0. Only the remaining prod(K_i - 1) entries are free parameters.
    """

    scope: Clique
    cards: Tuple[int, ...]
    energies: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(int(node) for node in self.scope))
        object.__setattr__(self, "cards", tuple(int(card) for card in self.cards))
        energies = np.array(self.energies, dtype=float)
        energies.setflags(write=False)
        object.__setattr__(self, "energies", energies)

        errors = self.check()
        if errors:
            raise PotentialError(f"Invalid potential table for {self.scope}: " + "; ".join(errors))

    def check(self) -> List[str]:
        errors = []
        errors.extend(self._check_scope())
        errors.extend(self._check_shape())
        if not errors:
            errors.extend(self._check_values())
        return errors

    def _check_scope(self) -> List[str]:
        errors = []
        if not self.scope:
            errors.append("scope must not be empty")
        if list(self.scope) != sorted(set(self.scope)):
            errors.append("scope must list distinct nodes in ascending order")
        if len(self.cards) != len(self.scope):
            errors.append("one cardinality per scope node is required")
        if any(card < 2 for card in self.cards):
            errors.append("cardinalities must be at least 2")
        return errors

    def _check_shape(self) -> List[str]:
        if self.energies.shape != self.cards:
            return [f"table shape {self.energies.shape} does not match cardinalities {self.cards}"]
        return []

    def _check_values(self) -> List[str]:
        errors = []
        if not np.all(np.isfinite(self.energies)):
            errors.append("entries must be finite")
        for axis in range(self.energies.ndim):
            if np.any(np.take(self.energies, 0, axis=axis) != 0.0):
                errors.append(f"entries with node {self.scope[axis]} in state 0 must be exactly 0")
        return errors

    @classmethod
    def zeros(cls, scope: Sequence[int], cards: Sequence[int]) -> "PotentialTable":
        return cls(tuple(scope), tuple(cards), np.zeros(tuple(cards)))

    @classmethod
    def from_free(cls, scope: Sequence[int], cards: Sequence[int], values: Sequence[float]) -> "PotentialTable":
        """
        Builds a table from its free entries listed in row-major order over the states >= 1.
        """

        cards = tuple(int(card) for card in cards)
        free_shape = tuple(card - 1 for card in cards)
        values = np.asarray(values, dtype=float)
        if values.size != int(np.prod(free_shape)):
            raise PotentialError(
                f"Clique {tuple(scope)} expects {int(np.prod(free_shape))} free values, got {values.size}"
            )

        energies = np.zeros(cards)
        energies[free_index(len(cards))] = values.reshape(free_shape)
        return cls(tuple(scope), cards, energies)

    @property
    def num_free(self) -> int:
        return int(np.prod([card - 1 for card in self.cards]))

    def free_values(self) -> np.ndarray:
        return self.energies[free_index(len(self.cards))].ravel()

    def energy(self, x_scope: Sequence[int]) -> float:
        config = tuple(int(state) for state in x_scope)
        if len(config) != len(self.cards) or any(not 0 <= s < k for s, k in zip(config, self.cards)):
            raise PotentialError(f"Configuration {config} is out of range for cardinalities {self.cards}")
        return float(self.energies[config])


def energy(t: PotentialTable, x_scope: Sequence[int]) -> float:
    return t.energy(x_scope)
