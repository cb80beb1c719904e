"""Potential field data transfer objects.

Provides the per-point sample exported by grids and the diagonal map
s -> g(s) together with the diagonal values of the potential.
"""

import math
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.constants import Geometry, RegionTag
from app.schemas.minimax_dto import PlanePoint

Vector = Tuple[float, float]
Matrix = Tuple[Tuple[float, float], Tuple[float, float]]


class FieldSample(BaseModel):
    """Value, gradient and optional Hessian of the potential at one point.

    Attributes:
        point: Sample location in [0, 2]^2
        u: Potential value
        grad: Gradient, absent at the center and the four outer corners
        hessian: Symmetric Hessian, only in the interior off the diagonals and medians
        hessian_note: Reason the Hessian is absent, when it is
        region_tag: Dispatch region of the point
    """
    model_config = ConfigDict(frozen=True)

    point: PlanePoint
    u: float = Field(..., ge=-1e-12, le=1.0 + 1e-12)
    grad: Optional[Vector] = None
    hessian: Optional[Matrix] = None
    hessian_note: Optional[str] = None
    region_tag: RegionTag

    @model_validator(mode="after")
    def _check_sample(self) -> "FieldSample":
        if self.grad is not None and math.hypot(*self.grad) > 1.0 + 1e-9:
            raise ValueError(f"gradient magnitude {math.hypot(*self.grad)!r} exceeds 1")
        interior = self.region_tag is RegionTag.INTERIOR
        if self.hessian is None:
            if interior and not self.hessian_note:
                raise ValueError("interior sample without a Hessian needs a hessian_note")
        else:
            if not interior:
                raise ValueError(f"Hessian present in region '{self.region_tag.value}'")
            if self.hessian_note is not None:
                raise ValueError("Hessian present together with a hessian_note")
            if self.hessian[0][1] != self.hessian[1][0]:
                raise ValueError("Hessian is not symmetric")
        return self


class DiagonalMap(BaseModel):
    """The inverse pair s = W_r(g(s), pi/4) along the diagonal.

    Attributes:
        s: Arc length along the diagonal from the origin
        g_of_s: Gradient magnitude at s times the unit diagonal vector
    """
    model_config = ConfigDict(frozen=True)

    s: float = Field(..., ge=0.0, le=Geometry.SQRT2)
    g_of_s: float = Field(..., ge=0.0, le=1.0)


class DiagonalValue(DiagonalMap):
    """Diagonal potential value u(s 1) = s g(s) - W(g(s), pi/4).

    Attributes:
        u: Potential value on the diagonal
        g_prime: Slope g'(s) = 1/W_rr(g(s), pi/4), absent at the two endpoints
    """
    u: float = Field(..., ge=0.0, le=1.0)
    g_prime: Optional[float] = Field(default=None, gt=0.0)

    @property
    def g(self) -> float:
        return self.g_of_s
