from pydantic import BaseModel, ConfigDict, Field


class OptConfig(BaseModel):
    """
    Settings for `maximize`.

    `grad_tol` is compared against the infinity-norm of the (penalized) gradient. `polish_steps` bounds the Newton
    refinement applied after the quasi-Newton phase to objectives that can supply an exact Hessian; 0 disables it.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    grad_tol: float = Field(default=1e-8, gt=0)
    max_iters: int = Field(default=5000, ge=1)
    memory: int = Field(default=10, ge=1)
    max_line_search: int = Field(default=40, ge=1)
    ftol: float = Field(default=0.0, ge=0)
    penalty: float = Field(default=0.0, ge=0)
    polish_steps: int = Field(default=20, ge=0)
    require_convergence: bool = False
