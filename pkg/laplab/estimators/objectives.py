"""
Log-likelihood objectives of auxiliary models, averaged over a weight table on the block's domain.

With an empirical histogram as weights these are the mean log-likelihoods of the data; with an exact distribution
they are minus the KL divergence up to a constant. Parameters are energies of normalized tables, so the gradient of
every objective is (model expectations of the indicator features) minus (their weighted average).
"""
from abc import abstractmethod
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from laplab.exceptions import EstimationError
from laplab.optimize import Objective
from laplab.potentials import ParamLayout

from .tasks import EstimatorTask, ObjectiveKind

# feature matrices larger than this many entries are not built, so no exact Hessian is offered
HESSIAN_ENTRY_LIMIT = 2**22


class BlockObjective(Objective):
    def __init__(self, layout: ParamLayout, nodes: Sequence[int], weights: np.ndarray, description: str = ""):
        self.layout = layout
        self.nodes = tuple(nodes)
        self.weights = np.asarray(weights, dtype=float)
        expected_shape = tuple(layout.cards[node] for node in self.nodes)
        if self.weights.shape != expected_shape:
            raise EstimationError(f"Weight table has shape {self.weights.shape}, expected {expected_shape}")
        self.statistics = layout.expectations(self.weights, self.nodes)
        self.description = description
        self._features: Optional[np.ndarray] = None

    @property
    def dimension(self) -> int:
        return self.layout.dimension

    @property
    def features(self) -> Optional[np.ndarray]:
        if self._features is None and self.weights.size * max(self.dimension, 1) <= HESSIAN_ENTRY_LIMIT:
            self._features = self.layout.feature_matrix(self.nodes)
        return self._features

    @abstractmethod
    def curvature(self, v: np.ndarray) -> np.ndarray:
        """
        The diagonal of minus the Hessian: the per-entry information of the fitted auxiliary model.
        """

        raise NotImplementedError()


class MarginalObjective(BlockObjective):
    """
    sum_x w(x) log p(x | v) for the auxiliary model over all of its domain.
    """

    def _log_probabilities(self, v: np.ndarray) -> np.ndarray:
        log_u = self.layout.log_tensor(v, self.nodes)
        return log_u - logsumexp(log_u)

    def value_and_gradient(self, v: np.ndarray) -> Tuple[float, np.ndarray]:
        log_p = self._log_probabilities(v)
        value = float(np.sum(self.weights * log_p))
        return value, self.layout.expectations(np.exp(log_p), self.nodes) - self.statistics

    def hessian(self, v: np.ndarray) -> Optional[np.ndarray]:
        features = self.features
        if features is None:
            return None
        p = np.exp(self._log_probabilities(v)).ravel()
        mean = features.T @ p
        return np.outer(mean, mean) - features.T @ (p[:, None] * features)

    def curvature(self, v: np.ndarray) -> np.ndarray:
        mean = self.layout.expectations(np.exp(self._log_probabilities(v)), self.nodes)
        return mean * (1 - mean)


class ConditionalObjective(BlockObjective):
    """
    sum_x w(x) log p(x_j | x_rest, v) for the auxiliary conditional of node j given the rest of the domain.

    Every clique of the layout must contain j; potentials without j cancel in the conditional.
    """

    def __init__(
        self, layout: ParamLayout, nodes: Sequence[int], node: int, weights: np.ndarray, description: str = ""
    ):
        super().__init__(layout, nodes, weights, description)
        if node not in self.nodes:
            raise EstimationError(f"Node {node} is not part of the domain {self.nodes}")
        self.node = node
        self.axis = self.nodes.index(node)
        self.rest_weights = self.weights.sum(axis=self.axis, keepdims=True)

    def _log_conditional(self, v: np.ndarray) -> np.ndarray:
        log_u = self.layout.log_tensor(v, self.nodes)
        return log_u - logsumexp(log_u, axis=self.axis, keepdims=True)

    def value_and_gradient(self, v: np.ndarray) -> Tuple[float, np.ndarray]:
        log_conditional = self._log_conditional(v)
        value = float(np.sum(self.weights * log_conditional))
        weighted = self.rest_weights * np.exp(log_conditional)
        return value, self.layout.expectations(weighted, self.nodes) - self.statistics

    def hessian(self, v: np.ndarray) -> Optional[np.ndarray]:
        features = self.features
        if features is None:
            return None
        conditional = np.exp(self._log_conditional(v))
        weighted = (self.rest_weights * conditional).ravel()
        second_moment = features.T @ (weighted[:, None] * features)

        # per state of the rest: the conditional mean of the features over x_j
        num_states = self.weights.shape[self.axis]
        per_state = np.moveaxis(features.reshape(self.weights.shape + (self.dimension,)), self.axis, -2)
        per_state = per_state.reshape(-1, num_states, self.dimension)
        cond = np.moveaxis(conditional, self.axis, -1).reshape(-1, num_states)
        rest = np.moveaxis(self.rest_weights, self.axis, -1).reshape(-1)
        means = np.einsum("rk,rkd->rd", cond, per_state)
        return (rest[:, None] * means).T @ means - second_moment

    def curvature(self, v: np.ndarray) -> np.ndarray:
        conditional = np.exp(self._log_conditional(v))
        first = self.layout.expectations(self.rest_weights * conditional, self.nodes)
        second = self.layout.expectations(self.rest_weights * conditional**2, self.nodes)
        return first - second


def block_objective(task: EstimatorTask, weights: np.ndarray) -> BlockObjective:
    description = f"block {task.block_id} ({task.kind.value})"
    if task.kind == ObjectiveKind.CONDITIONAL:
        return ConditionalObjective(task.layout, task.domain, task.node, weights, description)
    return MarginalObjective(task.layout, task.domain, weights, description)


class CompositeObjective(Objective):
    """
    The sum of several block objectives over one shared vector.

    `positions[b]` maps every coordinate of block b onto the shared vector, so blocks that target the same clique read
    the same coordinates and block-local nuisance coordinates appear in one block only.
    """

    def __init__(self, blocks: Sequence[Objective], positions: Sequence[np.ndarray], dimension: int):
        if len(blocks) != len(positions):
            raise EstimationError("Every block needs its position map")
        for block, index in zip(blocks, positions):
            if len(index) != block.dimension:
                raise EstimationError(f"Position map of {block!r} has {len(index)} entries")
        self.blocks: List[Objective] = list(blocks)
        self.positions = [np.asarray(index, dtype=int) for index in positions]
        self._dimension = dimension
        self.description = f"composite of {len(self.blocks)} blocks"

    @property
    def dimension(self) -> int:
        return self._dimension

    def value_and_gradient(self, v: np.ndarray) -> Tuple[float, np.ndarray]:
        total = 0.0
        gradient = np.zeros(self._dimension)
        for block, index in zip(self.blocks, self.positions):
            value, block_gradient = block.value_and_gradient(v[index])
            total += value
            np.add.at(gradient, index, block_gradient)
        return total, gradient

    def hessian(self, v: np.ndarray) -> Optional[np.ndarray]:
        hessian = np.zeros((self._dimension, self._dimension))
        for block, index in zip(self.blocks, self.positions):
            block_hessian = block.hessian(v[index])
            if block_hessian is None:
                return None
            hessian[np.ix_(index, index)] += block_hessian
        return hessian
