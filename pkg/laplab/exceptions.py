class LapLabError(Exception):
    """
    Base class for every error raised by laplab.
    """


class GraphError(LapLabError, ValueError):
    pass


class CliqueLimitError(GraphError):
    """
    Raised when maximal clique enumeration would produce more cliques than the configured cap.
    """


class PotentialError(LapLabError, ValueError):
    pass


class EnumerationLimitError(LapLabError):
    """
    Raised when an exact computation would need to enumerate more joint states than the configured cap.
    """


class EstimationError(LapLabError):
    pass


class NonConvergenceError(EstimationError):
    pass


class OptimizationError(LapLabError, ArithmeticError):
    pass


class ConfigError(LapLabError, ValueError):
    pass


class FormatError(LapLabError, ValueError):
    pass
