import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from laplab.exceptions import NonConvergenceError, OptimizationError

from .config import OptConfig
from .objective import Objective, ValueAndGradient

logger = logging.getLogger(__name__)

# a polishing step may lose this much (relative) objective value to rounding and still count as ascent
ROUNDING_SLACK = 1e-12
MAX_STEP_HALVINGS = 10


@dataclass(frozen=True)
class OptimizationReport:
    iterations: int
    grad_norm: float
    converged: bool
    value: float
    message: str = ""


class _Penalized:
    """
    The objective minus a ridge term of strength `penalty`, with non-finite values turned into errors.
    """

    def __init__(self, objective: Objective, penalty: float):
        self.objective = objective
        self.penalty = penalty
        self.evaluations = 0

    def __call__(self, v: np.ndarray) -> ValueAndGradient:
        self.evaluations += 1
        value, gradient = self.objective.value_and_gradient(v)
        if self.penalty:
            value -= 0.5 * self.penalty * float(v @ v)
            gradient = gradient - self.penalty * v
        if not np.isfinite(value) or not np.all(np.isfinite(gradient)):
            raise OptimizationError(f"{self.objective!r} is not finite at the current parameters")
        if gradient.shape != v.shape:
            raise OptimizationError(f"{self.objective!r} returned a gradient of shape {gradient.shape}")
        return value, gradient

    def hessian(self, v: np.ndarray) -> Optional[np.ndarray]:
        hessian = self.objective.hessian(v)
        if hessian is None:
            return None
        if self.penalty:
            hessian = hessian - self.penalty * np.eye(len(v))
        return hessian


def _inf_norm(gradient: np.ndarray) -> float:
    return float(np.max(np.abs(gradient))) if gradient.size else 0.0


def _polish(
    penalized: _Penalized, v: np.ndarray, value: float, gradient: np.ndarray, cfg: OptConfig
) -> Tuple[np.ndarray, float, np.ndarray, int]:
    """
    Newton refinement from the quasi-Newton solution. A step (or a halved step) is accepted only when it lowers the
    gradient norm without giving up objective value beyond rounding.
    """

    steps = 0
    norm = _inf_norm(gradient)
    while steps < cfg.polish_steps and norm > cfg.grad_tol:
        hessian = penalized.hessian(v)
        if hessian is None:
            break
        direction = np.linalg.lstsq(-hessian, gradient, rcond=None)[0]

        accepted = False
        scale = 1.0
        for _ in range(MAX_STEP_HALVINGS):
            candidate = v + scale * direction
            try:
                candidate_value, candidate_gradient = penalized(candidate)
            except OptimizationError:
                scale /= 2
                continue
            candidate_norm = _inf_norm(candidate_gradient)
            if candidate_norm < norm and candidate_value >= value - ROUNDING_SLACK * (1 + abs(value)):
                v, value, gradient, norm = candidate, candidate_value, candidate_gradient, candidate_norm
                accepted = True
                break
            scale /= 2

        if not accepted:
            break
        steps += 1
    return v, value, gradient, steps


def maximize(
    obj: Objective, init: np.ndarray, cfg: Optional[OptConfig] = None
) -> Tuple[np.ndarray, OptimizationReport]:
    """
    Maximizes `obj` from `init` with L-BFGS-B followed by an optional Newton polish.

    Hitting the iteration limit is not an error: the report's `converged` flag is False and a warning is logged,
    unless `cfg.require_convergence` asks for a NonConvergenceError instead.
    """

    cfg = cfg or OptConfig()
    init = np.array(init, dtype=float)
    if init.shape != (obj.dimension,):
        raise OptimizationError(f"Initial vector has shape {init.shape}, expected ({obj.dimension},)")
    if not np.all(np.isfinite(init)):
        raise OptimizationError("Initial vector must be finite")

    penalized = _Penalized(obj, cfg.penalty)
    if obj.dimension == 0:
        value, _ = penalized(init)
        return init, OptimizationReport(0, 0.0, True, value, "empty parameter vector")

    def negated(v: np.ndarray) -> ValueAndGradient:
        value, gradient = penalized(v)
        return -value, -gradient

    result = minimize(
        negated,
        init,
        method="L-BFGS-B",
        jac=True,
        options={
            "maxiter": cfg.max_iters,
            "maxfun": max(15000, 4 * cfg.max_iters),
            "maxcor": cfg.memory,
            "maxls": cfg.max_line_search,
            "gtol": cfg.grad_tol,
            "ftol": cfg.ftol,
        },
    )

    v = np.asarray(result.x, dtype=float)
    value, gradient = penalized(v)
    v, value, gradient, polished = _polish(penalized, v, value, gradient, cfg)

    norm = _inf_norm(gradient)
    message = result.message if isinstance(result.message, str) else result.message.decode()
    report = OptimizationReport(
        iterations=int(result.nit) + polished,
        grad_norm=norm,
        converged=norm <= cfg.grad_tol,
        value=value,
        message=message,
    )
    logger.debug(
        "%r: %d iterations (%d polishing), |g|=%.3g, value=%.12g, %s",
        obj,
        report.iterations,
        polished,
        norm,
        value,
        message,
    )

    if not report.converged:
        if cfg.require_convergence:
            raise NonConvergenceError(f"{obj!r} did not converge: |g|={norm:.3g} after {report.iterations} iterations")
        logger.warning("%r stopped with |g|=%.3g > %.3g (%s)", obj, norm, cfg.grad_tol, message)
    return v, report


def check_gradient(obj: Objective, at: np.ndarray, h: float = 1e-5) -> float:
    """
    Compares the analytic gradient against central differences with step `h` and returns the largest relative
    deviation over the coordinates, relative to max(1, |analytic|, |numeric|).
    """

    if h <= 0:
        raise OptimizationError(f"Step must be positive, got {h}")
    at = np.asarray(at, dtype=float)
    _, analytic = obj.value_and_gradient(at)

    numeric = np.empty(obj.dimension)
    for i in range(obj.dimension):
        step = np.zeros(obj.dimension)
        step[i] = h
        numeric[i] = (obj.value(at + step) - obj.value(at - step)) / (2 * h)

    if not obj.dimension:
        return 0.0
    scale = np.maximum(1.0, np.maximum(np.abs(analytic), np.abs(numeric)))
    return float(np.max(np.abs(analytic - numeric) / scale))
