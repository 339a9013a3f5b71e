import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, List, Optional, Sequence

import numpy as np

from laplab.exceptions import EstimationError
from laplab.graph import Clique
from laplab.model import DEFAULT_ENUMERATION_CAP, Dataset, ProbabilityTable, empirical_distribution
from laplab.optimize import OptConfig, OptimizationReport, maximize
from laplab.potentials import ParamLayout, ParamVector
from laplab.util import parallel_map

from .objectives import block_objective
from .tasks import EstimatorTask, ObjectiveKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LocalEstimate:
    """
    The fitted target parameters of one block. `auxiliary` keeps the full fitted auxiliary vector, nuisance entries
    included; only `values` ever leaves the block.
    """

    block_id: int
    anchor: Clique
    values: Dict[Clique, np.ndarray]
    curvature: Dict[Clique, np.ndarray]
    samples: int
    report: OptimizationReport
    certified: bool = True
    auxiliary: Optional[ParamVector] = field(default=None, repr=False)

    def __post_init__(self):
        errors = self.check()
        if errors:
            raise EstimationError(f"Invalid estimate of block {self.block_id}: " + "; ".join(errors))

    def check(self) -> List[str]:
        errors = []
        for clique, values in self.values.items():
            if not np.all(np.isfinite(values)):
                errors.append(f"values of {clique} are not finite")
            if clique not in self.curvature:
                errors.append(f"no curvature for {clique}")
        return errors

    def embed(self, layout: ParamLayout) -> ParamVector:
        """
        The estimate as a vector over `layout`, with exact zeros outside the block's targets.
        """

        return ParamVector.from_cliques(layout, self.values)


def _fit(task: EstimatorTask, weights: np.ndarray, samples: int, cfg: Optional[OptConfig]) -> LocalEstimate:
    objective = block_objective(task, weights)
    values, report = maximize(objective, np.zeros(objective.dimension), cfg)
    fitted = ParamVector(task.layout, values)
    curvature = objective.curvature(values) if objective.dimension else np.zeros(0)

    logger.debug(
        "block %d over %s: %d iterations, |g|=%.3g", task.block_id, task.domain, report.iterations, report.grad_norm
    )
    return LocalEstimate(
        block_id=task.block_id,
        anchor=task.anchor,
        values={clique: fitted.clique_values(clique).copy() for clique in task.target_cliques},
        curvature={clique: curvature[task.layout.slice_of(clique)].copy() for clique in task.target_cliques},
        samples=samples,
        report=report,
        certified=task.certified,
        auxiliary=fitted,
    )


def _require_kind(task: EstimatorTask, *kinds: ObjectiveKind):
    if task.kind not in kinds:
        raise EstimationError(f"Task {task.block_id} is a {task.kind.value} task")


def lap_estimate(
    task: EstimatorTask, d: Dataset, cfg: Optional[OptConfig] = None, cap: int = DEFAULT_ENUMERATION_CAP
) -> LocalEstimate:
    """
    Maximum likelihood fit of the block's auxiliary marginal to the data restricted to its domain.
    """

    _require_kind(task, ObjectiveKind.MARGINAL, ObjectiveKind.FULL)
    empirical = empirical_distribution(d, task.domain, cap)
    return _fit(task, empirical.probabilities, d.num_samples, cfg)


def clap_estimate(
    task: EstimatorTask, d: Dataset, cfg: Optional[OptConfig] = None, cap: int = DEFAULT_ENUMERATION_CAP
) -> LocalEstimate:
    """
    Maximum conditional likelihood fit of p(x_j | x_{A \\ {j}}) for the block's node j.
    """

    _require_kind(task, ObjectiveKind.CONDITIONAL)
    empirical = empirical_distribution(d, task.domain, cap)
    return _fit(task, empirical.probabilities, d.num_samples, cfg)


def fit_to_distribution(
    task: EstimatorTask, target: ProbabilityTable, cfg: Optional[OptConfig] = None
) -> LocalEstimate:
    """
    Fits the block's auxiliary model to an exact distribution over its domain (the infinite-data limit).

    A marginal task needs a joint target. A conditional task accepts either a joint over the domain or a conditional of
    its node.
    """

    if target.nodes != task.domain:
        raise EstimationError(f"Target is over {target.nodes}, the task domain is {task.domain}")
    if target.is_conditional and (task.kind != ObjectiveKind.CONDITIONAL or target.variable != task.node):
        raise EstimationError(f"A conditional target of node {target.variable} does not fit task {task.block_id}")
    return _fit(task, target.weights(), 0, cfg)


def estimate_task(
    task: EstimatorTask, d: Dataset, cfg: Optional[OptConfig] = None, cap: int = DEFAULT_ENUMERATION_CAP
) -> LocalEstimate:
    if task.kind == ObjectiveKind.CONDITIONAL:
        return clap_estimate(task, d, cfg, cap)
    return lap_estimate(task, d, cfg, cap)


def run_tasks(
    tasks: Sequence[EstimatorTask],
    d: Dataset,
    cfg: Optional[OptConfig] = None,
    workers: int = 1,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> List[LocalEstimate]:
    """
    Fits every task independently, in a process pool when `workers` > 1. Results come back in task order.
    """

    return parallel_map(partial(estimate_task, d=d, cfg=cfg, cap=cap), tasks, workers)
