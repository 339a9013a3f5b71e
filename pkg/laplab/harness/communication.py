"""
Analytic communication accounting, in parameter scalars sent to a coordinator.

Authoritative assembly (LAP, CLAP) uploads each clique's parameters once, from its authoritative block. Consensus
uploads every block's estimate of every target clique. Centralized estimators exchange a full gradient per iteration.
"""
from typing import Sequence

from laplab.estimators import EstimatorResult, EstimatorSpec, EstimatorTask
from laplab.model import ModelStructure


def communication_cost(
    spec: EstimatorSpec, structure: ModelStructure, tasks: Sequence[EstimatorTask] = (), iterations: int = 1
) -> int:
    if spec.is_centralized:
        return iterations * structure.dimension
    if spec.combination == "auth":
        return structure.dimension
    layout = structure.layout
    return sum(layout.free_size(clique) for task in tasks for clique in task.target_cliques)


def result_communication(result: EstimatorResult, structure: ModelStructure) -> int:
    return communication_cost(result.spec, structure, result.tasks, result.estimate.iterations)
