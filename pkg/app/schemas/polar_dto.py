"""Gradient-space data transfer objects.

Points of the closed fundamental quadrant in polar gradient coordinates,
the truncation policy of every m_n-indexed series, and the record of
partial derivatives produced from one shared term set.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.core.constants import Geometry, SeriesConstants
from app.core.exceptions import DomainError


class PolarPoint(BaseModel):
    """Gradient-space point (r, theta) of the closed quadrant.

    Attributes:
        r: Gradient magnitude in [0, 1]
        theta: Gradient angle in [0, pi/2]
    """
    model_config = ConfigDict(frozen=True)

    r: float = Field(..., ge=0.0, le=1.0, description="Gradient magnitude |grad u|")
    theta: float = Field(..., ge=0.0, le=Geometry.HALF_PI, description="Gradient angle arg grad u")

    @classmethod
    def at(cls, r: float, theta: float) -> "PolarPoint":
        """Build a point, reporting an out-of-quadrant input as a DomainError."""
        try:
            return cls(r=r, theta=theta)
        except ValidationError as exc:
            raise DomainError("(r, theta)", (r, theta), "[0, 1] x [0, pi/2]") from exc


class SeriesPolicy(BaseModel):
    """Truncation and tolerance policy for series evaluation.

    Attributes:
        abs_tol: Absolute bound the first omitted term must fall below
        max_terms: Hard cap on the number of terms
        boundary_snap: Radius from which r is treated as 1 and closed forms are used
        product_crossover: Nome above which theta2 defaults to its product form
    """
    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default=1e-15, gt=0.0, description="Absolute truncation tolerance")
    max_terms: int = Field(default=100_000, ge=1, description="Cap on the number of series terms")
    boundary_snap: float = Field(default=1.0 - 1e-12, gt=0.0, lt=1.0, description="Closed-form radius threshold")
    product_crossover: float = Field(default=0.9, gt=0.0, lt=1.0, description="theta2 product-form crossover nome")

    @classmethod
    def from_settings(cls, cfg) -> "SeriesPolicy":
        return cls(
            abs_tol=cfg.SERIES_ABS_TOL,
            max_terms=cfg.SERIES_MAX_TERMS,
            boundary_snap=cfg.SERIES_BOUNDARY_SNAP,
            product_crossover=cfg.THETA2_PRODUCT_CROSSOVER,
        )

    @property
    def corner_width(self) -> float:
        """Angular width around 0 and pi/2 treated as a corner on r = 1."""
        return 1.0 - self.boundary_snap


class SeriesTerm(BaseModel):
    """One index of the m_n-indexed series.

    Attributes:
        n: Term index, starting at 1
        m: Frequency m_n = 4n - 2
        exponent: Radial exponent m_n^2
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    m: int
    exponent: int

    @model_validator(mode="after")
    def _check_mode(self) -> "SeriesTerm":
        if self.m % 4 != 2 or self.m != SeriesConstants.MODE_STEP * self.n - SeriesConstants.MODE_OFFSET:
            raise ValueError(f"m={self.m} is not 4n - 2 for n={self.n}")
        if self.exponent != self.m * self.m:
            raise ValueError(f"exponent={self.exponent} differs from m^2")
        return self

    @classmethod
    def of(cls, n: int) -> "SeriesTerm":
        m = SeriesConstants.MODE_STEP * n - SeriesConstants.MODE_OFFSET
        return cls(n=n, m=m, exponent=m * m)


class WPartials(BaseModel):
    """W and its companions at one point, evaluated from a single term set.

    Attributes:
        W: Hodograph potential
        W_r, W_theta, W_rr, W_rtheta, W_thetatheta: Partial derivatives of W
        U: rW_r - W
        U_r: Radial derivative of U, equal to r W_rr
        U_theta: Angular derivative of U, equal to (4/pi) theta2(2 theta, r^16)
        closed_form: True when the boundary closed forms on r = 1 were used
    """
    model_config = ConfigDict(frozen=True)

    r: float
    theta: float
    W: float
    W_r: float
    W_theta: float
    W_rr: float
    W_rtheta: float
    W_thetatheta: float
    U: float
    U_r: float
    U_theta: float
    terms: int = Field(..., ge=0, description="Number of series terms summed")
    closed_form: bool = False

    @property
    def gradient(self) -> tuple:
        """Cartesian gradient (r cos theta, r sin theta) this point represents."""
        return (self.r * math.cos(self.theta), self.r * math.sin(self.theta))
