from .communication import communication_cost, result_communication
from .config import ExperimentConfig, load_config, parse_config_text
from .experiment import ERROR, FAILED_CAP, NOT_CONVERGED, draw_dataset, run_experiment, run_unit
from .generators import generate_model, model_structure, random_parameters
from .report import AGGREGATE, HEADER, OK, ResultRow, metadata_path, read_csv, report_csv, write_metadata
