from .dataset import Dataset, dataset_from_rows, empirical_distribution, sufficient_statistics
from .distribution import ProbabilityTable
from .io import (
    format_model,
    read_dataset,
    read_graph,
    read_model,
    read_structure,
    write_dataset,
    write_estimate,
    write_model,
)
from .mrf_model import (
    DEFAULT_ENUMERATION_CAP,
    ModelStructure,
    MrfModel,
    exact_conditional,
    exact_joint,
    exact_marginal,
    log_joint_tensor,
    log_unnormalized,
    model_from_tables,
    partition_function,
    site_conditional,
)
from .sampling import DEFAULT_BURN_IN, DEFAULT_THINNING, sample_exact, sample_gibbs
