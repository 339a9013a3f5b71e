import logging
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np

from laplab.exceptions import EstimationError
from laplab.graph import Clique
from laplab.model import ModelStructure
from laplab.optimize import OptimizationReport
from laplab.potentials import ParamVector

from .local import LocalEstimate

logger = logging.getLogger(__name__)

# (block_id, weight) pairs per clique
Provenance = Dict[Clique, Tuple[Tuple[int, float], ...]]


class ConsensusKind(str, Enum):
    LINEAR = "linear"
    MAX = "max"
    AUTHORITATIVE = "auth"


class WeightScheme(str, Enum):
    UNIFORM = "uniform"
    SAMPLES = "samples"
    CURVATURE = "curvature"


@dataclass(frozen=True, eq=False)
class GlobalEstimate:
    params: ParamVector
    provenance: Provenance
    reports: Tuple[OptimizationReport, ...] = ()
    certified: bool = True

    @property
    def converged(self) -> bool:
        return all(report.converged for report in self.reports)

    @property
    def iterations(self) -> int:
        return sum(report.iterations for report in self.reports)


class ConsensusOperator(metaclass=ABCMeta):
    """
    Combines the estimates that several blocks produced for the same clique. Operators only ever look at one clique at
    a time, and they receive the contributions in ascending block order.
    """

    kind: ConsensusKind

    @abstractmethod
    def combine(
        self, clique: Clique, contributions: Sequence[LocalEstimate]
    ) -> Tuple[np.ndarray, Tuple[Tuple[int, float], ...]]:
        raise NotImplementedError()


class LinearConsensus(ConsensusOperator):
    """
    Per-clique convex combination. Curvature weights are formed coordinate by coordinate; the provenance records each
    block's mean weight over the clique's coordinates.
    """

    kind = ConsensusKind.LINEAR

    def __init__(self, weights: WeightScheme = WeightScheme.UNIFORM):
        self.weights = WeightScheme(weights)

    def _weights(self, clique: Clique, contributions: Sequence[LocalEstimate]) -> np.ndarray:
        size = len(contributions[0].values[clique])
        if self.weights == WeightScheme.SAMPLES:
            raw = np.array([[float(estimate.samples)] * size for estimate in contributions])
        elif self.weights == WeightScheme.CURVATURE:
            raw = np.array([estimate.curvature[clique] for estimate in contributions], dtype=float)
        else:
            raw = np.ones((len(contributions), size))

        raw = np.maximum(raw, 0.0)
        totals = raw.sum(axis=0)
        # coordinates with no usable weight fall back to a plain average
        return np.where(totals > 0, raw / np.where(totals > 0, totals, 1.0), 1.0 / len(contributions))

    def combine(self, clique, contributions):
        weights = self._weights(clique, contributions)
        values = np.sum([w * estimate.values[clique] for w, estimate in zip(weights, contributions)], axis=0)
        provenance = tuple(
            (estimate.block_id, float(np.mean(w)) if w.size else 1.0 / len(contributions))
            for w, estimate in zip(weights, contributions)
        )
        return values, provenance


class MaxConsensus(ConsensusOperator):
    """
    Per clique, the estimate of the single block with the largest selection score (the summed curvature of the
    clique's coordinates). Ties go to the lowest block id.
    """

    kind = ConsensusKind.MAX

    def combine(self, clique, contributions):
        best = contributions[0]
        best_score = float(np.sum(best.curvature[clique]))
        for estimate in contributions[1:]:
            score = float(np.sum(estimate.curvature[clique]))
            if score > best_score:
                best, best_score = estimate, score
        return best.values[clique].copy(), ((best.block_id, 1.0),)


class AuthoritativeConsensus(ConsensusOperator):
    """
    Per clique, the estimate of the block anchored at that clique, or of the lowest block id when no contributing block
    is anchored there. All other estimates are discarded.
    """

    kind = ConsensusKind.AUTHORITATIVE

    def combine(self, clique, contributions):
        anchored = [estimate for estimate in contributions if estimate.anchor == clique]
        chosen = anchored[0] if anchored else contributions[0]
        return chosen.values[clique].copy(), ((chosen.block_id, 1.0),)


def make_operator(kind: ConsensusKind, weights: WeightScheme = WeightScheme.UNIFORM) -> ConsensusOperator:
    kind = ConsensusKind(kind)
    if kind == ConsensusKind.LINEAR:
        return LinearConsensus(weights)
    if kind == ConsensusKind.MAX:
        return MaxConsensus()
    return AuthoritativeConsensus()


def consensus_combine(
    estimates: Sequence[LocalEstimate], op: ConsensusOperator, structure: ModelStructure
) -> GlobalEstimate:
    """
    Assembles a global estimate clique by clique. Raises EstimationError when a model clique has no contributing block.
    """

    ordered = sorted(estimates, key=lambda estimate: estimate.block_id)
    values: Dict[Clique, np.ndarray] = {}
    provenance: Provenance = {}
    uncovered: List[Clique] = []

    for clique in structure.cliques:
        contributions = [estimate for estimate in ordered if clique in estimate.values]
        if not contributions:
            uncovered.append(clique)
            continue
        values[clique], provenance[clique] = op.combine(clique, contributions)

    if uncovered:
        raise EstimationError(f"No block estimates the cliques {uncovered}")

    contributing = {block for entries in provenance.values() for block, _ in entries}
    certified = all(estimate.certified for estimate in ordered if estimate.block_id in contributing)
    logger.debug("%s consensus over %d blocks", op.kind.value, len(ordered))
    return GlobalEstimate(
        params=ParamVector.from_cliques(structure.layout, values),
        provenance=provenance,
        reports=tuple(estimate.report for estimate in ordered),
        certified=certified,
    )
