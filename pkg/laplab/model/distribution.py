from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from laplab.exceptions import PotentialError

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """
    A distribution over the joint states of `nodes`, one axis per node in ascending node order.

    When `variable` is set the table is the conditional p(x_variable | x_rest): every slice along that node's axis sums
    to 1. Otherwise the whole table sums to 1.
    """

    nodes: Tuple[int, ...]
    probabilities: np.ndarray
    variable: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(node) for node in self.nodes))
        probabilities = np.array(self.probabilities, dtype=float)
        probabilities.setflags(write=False)
        object.__setattr__(self, "probabilities", probabilities)

        errors = self.check()
        if errors:
            raise PotentialError("; ".join(errors))

    def check(self) -> List[str]:
        errors = []
        if list(self.nodes) != sorted(set(self.nodes)):
            errors.append("nodes must be distinct and ascending")
        if self.probabilities.ndim != len(self.nodes):
            errors.append(f"table has {self.probabilities.ndim} axes for {len(self.nodes)} nodes")
            return errors
        if not np.all(np.isfinite(self.probabilities)) or np.any(self.probabilities < 0):
            errors.append("probabilities must be finite and non-negative")
            return errors

        if self.variable is None:
            if abs(self.probabilities.sum() - 1.0) > SUM_TOLERANCE:
                errors.append(f"probabilities sum to {self.probabilities.sum()}, not 1")
        elif self.variable not in self.nodes:
            errors.append(f"conditional variable {self.variable} is not one of the nodes")
        elif np.any(np.abs(self.probabilities.sum(axis=self.axis_of(self.variable)) - 1.0) > SUM_TOLERANCE):
            errors.append(f"conditional slices along node {self.variable} must sum to 1")
        return errors

    @property
    def is_conditional(self) -> bool:
        return self.variable is not None

    def axis_of(self, node: int) -> int:
        try:
            return self.nodes.index(node)
        except ValueError:
            raise PotentialError(f"Node {node} is not part of the table over {self.nodes}")

    def marginalize(self, nodes: Iterable[int]) -> "ProbabilityTable":
        """
        The marginal over a subset of the nodes of a (non-conditional) table.
        """

        if self.is_conditional:
            raise PotentialError("Only joint tables can be marginalized")
        keep = tuple(sorted(set(nodes)))
        summed = tuple(self.axis_of(node) for node in self.nodes if node not in keep)
        for node in keep:
            self.axis_of(node)
        return ProbabilityTable(keep, self.probabilities.sum(axis=summed) if summed else self.probabilities)

    def conditional(self, j: int) -> "ProbabilityTable":
        if self.is_conditional:
            raise PotentialError("Table is already a conditional")
        axis = self.axis_of(j)
        totals = self.probabilities.sum(axis=axis, keepdims=True)
        # states of the rest with zero probability get a uniform conditional
        safe = np.where(totals > 0, totals, 1.0)
        conditional = np.where(totals > 0, self.probabilities / safe, 1.0 / self.probabilities.shape[axis])
        return ProbabilityTable(self.nodes, conditional, variable=j)

    def weights(self) -> np.ndarray:
        """
        Joint weights summing to 1 that a fitting objective averages over.

        A conditional table is spread uniformly over the states of the conditioning nodes.
        """

        if not self.is_conditional:
            return self.probabilities
        rest_states = self.probabilities.size // self.probabilities.shape[self.axis_of(self.variable)]
        return self.probabilities / rest_states
