"""
Estimators by name.

Plain names: ml, lap-full, lap-full-noedges, lap-1node, clap, pl, ccl-cond, ccl-marg, ccl-marg-noedges.
Consensus names: consensus-linear:<base>[:<weights>], consensus-max:<base>, consensus-auth:<base>,
where <base> picks the block decomposition (lap-full, lap-full-noedges, lap-1node, clap, pl) and <weights> is
uniform, samples or curvature.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from laplab.exceptions import ConfigError
from laplab.model import DEFAULT_ENUMERATION_CAP, Dataset, ModelStructure
from laplab.optimize import OptConfig

from .centralized import centralized_composite, centralized_ml
from .consensus import ConsensusKind, GlobalEstimate, WeightScheme, consensus_combine, make_operator
from .local import run_tasks
from .tasks import EstimatorTask, Neighbourhood, ObjectiveKind, build_clap_tasks, build_lap_tasks, build_pl_tasks

logger = logging.getLogger(__name__)

TaskBuilder = Callable[[ModelStructure], List[EstimatorTask]]

TASK_BUILDERS: Dict[str, TaskBuilder] = {
    "lap-full": lambda structure: build_lap_tasks(structure, Neighbourhood.FULL, True),
    "lap-full-noedges": lambda structure: build_lap_tasks(structure, Neighbourhood.FULL, False),
    "lap-1node": lambda structure: build_lap_tasks(structure, Neighbourhood.ONE_NODE, True),
    "clap": lambda structure: build_clap_tasks(structure, Neighbourhood.ONE_NODE),
    "pl": build_pl_tasks,
}

# plain name -> (decomposition, how the block fits are turned into one estimate)
PLAIN_ESTIMATORS = {
    "ml": (None, "ml"),
    "lap-full": ("lap-full", "auth"),
    "lap-full-noedges": ("lap-full-noedges", "auth"),
    "lap-1node": ("lap-1node", "auth"),
    "clap": ("clap", "auth"),
    "pl": ("pl", "composite"),
    "ccl-cond": ("clap", "composite"),
    "ccl-marg": ("lap-full", "composite"),
    "ccl-marg-noedges": ("lap-full-noedges", "composite"),
}

CONSENSUS_BASES = tuple(TASK_BUILDERS)

# consensus-auth:<base> is the plain <base> estimator for every decomposition except pl, so only that one is listed
ALL_ESTIMATORS = (
    tuple(PLAIN_ESTIMATORS)
    + tuple(f"consensus-{kind}:{base}" for kind in ("linear", "max") for base in CONSENSUS_BASES)
    + ("consensus-auth:pl",)
)


@dataclass(frozen=True)
class EstimatorSpec:
    name: str
    base: Optional[str]
    combination: str
    weights: WeightScheme = WeightScheme.UNIFORM

    @property
    def is_consensus(self) -> bool:
        return self.name.startswith("consensus-")

    @property
    def is_centralized(self) -> bool:
        return self.combination in ("ml", "composite")


@dataclass(frozen=True, eq=False)
class EstimatorResult:
    spec: EstimatorSpec
    estimate: GlobalEstimate
    tasks: List[EstimatorTask]

    @property
    def blocks(self) -> int:
        return max(len(self.tasks), 1)

    @property
    def converged(self) -> bool:
        return self.estimate.converged


def parse_estimator(name: str) -> EstimatorSpec:
    if name in PLAIN_ESTIMATORS:
        base, combination = PLAIN_ESTIMATORS[name]
        return EstimatorSpec(name, base, combination)

    family, _, rest = name.partition(":")
    kind = family[len("consensus-") :] if family.startswith("consensus-") else None
    base, _, weights = rest.partition(":")
    if kind not in {item.value for item in ConsensusKind} or base not in CONSENSUS_BASES:
        raise ConfigError(f"Unknown estimator '{name}'")
    if weights and kind != ConsensusKind.LINEAR.value:
        raise ConfigError(f"Only linear consensus takes a weight scheme, got '{name}'")
    try:
        scheme = WeightScheme(weights or WeightScheme.UNIFORM.value)
    except ValueError:
        raise ConfigError(f"Unknown weight scheme '{weights}' in '{name}'")
    return EstimatorSpec(name, base, kind, scheme)


def build_tasks(spec: EstimatorSpec, structure: ModelStructure) -> List[EstimatorTask]:
    if spec.base is None:
        return []
    return TASK_BUILDERS[spec.base](structure)


def run_estimator(
    name: str,
    structure: ModelStructure,
    d: Dataset,
    cfg: Optional[OptConfig] = None,
    workers: int = 1,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> EstimatorResult:
    spec = parse_estimator(name)
    tasks = build_tasks(spec, structure)
    logger.debug("running %s with %d blocks", name, len(tasks))

    if spec.combination == "ml":
        estimate = centralized_ml(structure, d, cfg, cap)
    elif spec.combination == "composite":
        kind = tasks[0].kind if tasks else ObjectiveKind.CONDITIONAL
        estimate = centralized_composite(tasks, d, cfg, kind, structure, cap)
    else:
        estimates = run_tasks(tasks, d, cfg, workers, cap)
        operator = make_operator(ConsensusKind(spec.combination), spec.weights)
        estimate = consensus_combine(estimates, operator, structure)
    return EstimatorResult(spec, estimate, tasks)
