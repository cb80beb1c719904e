"""Physical-plane data transfer objects.

Points of the square [0, 2]^2, the tolerance policy of the nested
one-dimensional solves, and the critical point they return.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from app.core.constants import Geometry
from app.core.exceptions import DomainError


class PlanePoint(BaseModel):
    """Point of the closed square [0, 2]^2.

    Attributes:
        x: Abscissa
        y: Ordinate
    """
    model_config = ConfigDict(frozen=True)

    x: float = Field(..., ge=0.0, le=Geometry.SIDE, description="Abscissa")
    y: float = Field(..., ge=0.0, le=Geometry.SIDE, description="Ordinate")

    @classmethod
    def at(cls, x: float, y: float) -> "PlanePoint":
        """Build a point, reporting an input outside the square as a DomainError."""
        try:
            return cls(x=x, y=y)
        except ValidationError as exc:
            raise DomainError("(x, y)", (x, y), "the square [0, 2] x [0, 2]") from exc

    @property
    def in_open_quadrant(self) -> bool:
        return 0.0 < self.x < 1.0 and 0.0 < self.y < 1.0


class SolverPolicy(BaseModel):
    """Tolerances of the inner radial and outer angular solves.

    Attributes:
        root_tol: Residual tolerance of both one-dimensional solves
        max_iter: Iteration cap per solve
        bracket_shrink: Bracket width at which a solve stops
        angle_clamp: Offset of the outer bracket from 0 and pi/2
        squeeze_tol: Width of the bounds squeeze below which the squeeze limit is returned
    """
    model_config = ConfigDict(frozen=True)

    root_tol: float = Field(default=1e-13, gt=0.0)
    max_iter: int = Field(default=200, ge=1)
    bracket_shrink: float = Field(default=1e-15, gt=0.0)
    angle_clamp: float = Field(default=1e-9, gt=0.0, lt=Geometry.QUARTER_PI)
    squeeze_tol: float = Field(default=1e-13, gt=0.0)

    @classmethod
    def from_settings(cls, cfg) -> "SolverPolicy":
        return cls(
            root_tol=cfg.SOLVER_ROOT_TOL,
            max_iter=cfg.SOLVER_MAX_ITER,
            bracket_shrink=cfg.SOLVER_BRACKET_SHRINK,
            angle_clamp=cfg.SOLVER_ANGLE_CLAMP,
            squeeze_tol=cfg.SOLVER_SQUEEZE_TOL,
        )


class MinimaxResult(BaseModel):
    """Saddle point of f_x(r, theta) = r(x cos theta + y sin theta) - W(r, theta).

    Attributes:
        point: The physical point x in the open quadrant
        r_star: Gradient magnitude at x
        theta_star: Gradient angle at x
        u: Potential value
        inner_iters: Total radial solve iterations
        outer_iters: Angular solve iterations
        radial_residual: |W_r(r*, theta*) - (x cos theta* + y sin theta*)|
        angular_residual: |h_x'(theta*)|
        closed_form: True when the squeeze limit replaced the solves
    """
    model_config = ConfigDict(frozen=True)

    point: PlanePoint
    r_star: float = Field(..., ge=0.0, le=1.0)
    theta_star: float = Field(..., ge=0.0, le=Geometry.HALF_PI)
    u: float
    inner_iters: int = Field(default=0, ge=0)
    outer_iters: int = Field(default=0, ge=0)
    radial_residual: float = 0.0
    angular_residual: float = 0.0
    closed_form: bool = False

    @property
    def grad(self) -> tuple:
        """g(x) = (r* cos theta*, r* sin theta*)."""
        return (self.r_star * math.cos(self.theta_star), self.r_star * math.sin(self.theta_star))
