import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from laplab.exceptions import EstimationError
from laplab.graph import Clique, preserves_potential
from laplab.model import DEFAULT_ENUMERATION_CAP, Dataset, ModelStructure, empirical_distribution
from laplab.optimize import OptConfig, maximize
from laplab.potentials import ParamVector

from .consensus import GlobalEstimate
from .local import lap_estimate
from .objectives import CompositeObjective, block_objective
from .tasks import EstimatorTask, ObjectiveKind, build_ml_task

logger = logging.getLogger(__name__)


def centralized_ml(
    structure: ModelStructure, d: Dataset, cfg: Optional[OptConfig] = None, cap: int = DEFAULT_ENUMERATION_CAP
) -> GlobalEstimate:
    """
    Full maximum likelihood over the whole model, with the partition function enumerated exactly.
    """

    estimate = lap_estimate(build_ml_task(structure), d, cfg, cap)
    return GlobalEstimate(
        params=ParamVector.from_cliques(structure.layout, estimate.values),
        provenance={clique: ((0, 1.0),) for clique in structure.cliques},
        reports=(estimate.report,),
    )


def _tied(structure: ModelStructure, task: EstimatorTask, clique: Clique) -> bool:
    if clique in task.target_cliques:
        return True
    if task.kind == ObjectiveKind.FULL:
        return clique in structure.layout
    return clique in structure.layout and preserves_potential(structure.graph, task.domain, clique)


def shared_coordinates(
    structure: ModelStructure, tasks: Sequence[EstimatorTask]
) -> Tuple[List[np.ndarray], int, Dict[Clique, Tuple[Tuple[int, float], ...]]]:
    """
    Maps every block coordinate onto the shared vector.

    A model clique whose potential the block's domain preserves (every target among them) is tied to the model's own
    coordinates. Induced cliques and model cliques the domain does not preserve get fresh block-local coordinates,
    appended after the model's.
    """

    layout = structure.layout
    size = layout.dimension
    positions = []
    tied: Dict[Clique, List[int]] = {}
    for task in tasks:
        index = np.empty(task.layout.dimension, dtype=int)
        for clique in task.layout.scopes:
            block_slice = task.layout.slice_of(clique)
            width = block_slice.stop - block_slice.start
            if _tied(structure, task, clique):
                if clique not in layout:
                    raise EstimationError(f"Target {clique} of block {task.block_id} is not a model clique")
                model_slice = layout.slice_of(clique)
                index[block_slice] = np.arange(model_slice.start, model_slice.stop)
                tied.setdefault(clique, []).append(task.block_id)
            else:
                index[block_slice] = np.arange(size, size + width)
                size += width
        positions.append(index)

    uncovered = [clique for clique in structure.cliques if clique not in tied]
    if uncovered:
        raise EstimationError(f"No task targets the cliques {uncovered}")
    provenance = {clique: tuple((block, 1.0) for block in tied[clique]) for clique in structure.cliques}
    return positions, size, provenance


def centralized_composite(
    tasks: Sequence[EstimatorTask],
    d: Dataset,
    cfg: Optional[OptConfig] = None,
    kind: ObjectiveKind = ObjectiveKind.CONDITIONAL,
    structure: Optional[ModelStructure] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> GlobalEstimate:
    """
    Maximizes the sum of the block objectives of `tasks` over one shared parameter vector.

    Model cliques whose potential a block preserves are shared across blocks; any other auxiliary clique (an induced
    edge, or a clique whose potential the block's domain does not preserve) is a nuisance parameter of its block and
    is dropped from the result.
    """

    if structure is None:
        raise EstimationError("The model structure is required to tie block parameters")
    if not tasks:
        raise EstimationError("Composite likelihood needs at least one task")
    wrong = [task.block_id for task in tasks if task.kind != kind]
    if wrong:
        raise EstimationError(f"Blocks {wrong} are not {kind.value} tasks")

    positions, size, provenance = shared_coordinates(structure, tasks)
    blocks = [block_objective(task, empirical_distribution(d, task.domain, cap).probabilities) for task in tasks]
    objective = CompositeObjective(blocks, positions, size)

    values, report = maximize(objective, np.zeros(size), cfg)
    logger.debug(
        "centralized %s composite likelihood over %d blocks: %d nuisance parameters",
        kind.value,
        len(tasks),
        size - structure.dimension,
    )
    return GlobalEstimate(
        params=ParamVector(structure.layout, values[: structure.dimension]),
        provenance=provenance,
        reports=(report,),
        certified=all(task.certified for task in tasks),
    )
