from abc import ABCMeta, abstractmethod
from typing import Callable, Optional, Tuple

import numpy as np

ValueAndGradient = Tuple[float, np.ndarray]


class Objective(metaclass=ABCMeta):
    """
    A smooth function of a flat parameter vector that is to be maximized.

    Implementations must be pure: the value and gradient depend on the parameter vector only.
    """

    description: str = ""

    @property
    @abstractmethod
    def dimension(self) -> int:
        raise NotImplementedError()

    @abstractmethod
    def value_and_gradient(self, v: np.ndarray) -> ValueAndGradient:
        raise NotImplementedError()

    def hessian(self, v: np.ndarray) -> Optional[np.ndarray]:
        """
        The exact Hessian at `v`, or None when the objective cannot provide it cheaply.
        """

        return None

    def value(self, v: np.ndarray) -> float:
        return self.value_and_gradient(v)[0]

    def __repr__(self):
        return f"<{type(self).__name__} D={self.dimension} {self.description}>"


class FunctionObjective(Objective):
    """
    Wraps a plain callable returning (value, gradient).
    """

    def __init__(
        self,
        dimension: int,
        fn: Callable[[np.ndarray], ValueAndGradient],
        description: str = "",
        hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ):
        self._dimension = dimension
        self._fn = fn
        self._hessian = hessian
        self.description = description

    @property
    def dimension(self) -> int:
        return self._dimension

    def value_and_gradient(self, v: np.ndarray) -> ValueAndGradient:
        value, gradient = self._fn(np.asarray(v, dtype=float))
        return float(value), np.asarray(gradient, dtype=float)

    def hessian(self, v: np.ndarray) -> Optional[np.ndarray]:
        return None if self._hessian is None else np.asarray(self._hessian(np.asarray(v, dtype=float)), dtype=float)
