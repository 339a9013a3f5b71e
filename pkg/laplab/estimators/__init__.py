from .centralized import centralized_composite, centralized_ml, shared_coordinates
from .consensus import (
    AuthoritativeConsensus,
    ConsensusKind,
    ConsensusOperator,
    GlobalEstimate,
    LinearConsensus,
    MaxConsensus,
    WeightScheme,
    consensus_combine,
    make_operator,
)
from .local import LocalEstimate, clap_estimate, estimate_task, fit_to_distribution, lap_estimate, run_tasks
from .objectives import BlockObjective, CompositeObjective, ConditionalObjective, MarginalObjective, block_objective
from .registry import (
    ALL_ESTIMATORS,
    CONSENSUS_BASES,
    EstimatorResult,
    EstimatorSpec,
    build_tasks,
    parse_estimator,
    run_estimator,
)
from .tasks import (
    EstimatorTask,
    Neighbourhood,
    ObjectiveKind,
    authoritative_blocks,
    build_clap_tasks,
    build_lap_tasks,
    build_ml_task,
    build_pl_tasks,
)
