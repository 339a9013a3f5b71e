from .config import OptConfig
from .maximize import OptimizationReport, check_gradient, maximize
from .objective import FunctionObjective, Objective
