"""Analysis data transfer objects."""

from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class DisproofReport(BaseModel):
    """Diagonal gap d(r) = U(r, pi/4) - r and its positive maximum.

    A positive gap at r_max means u > |grad u| at the diagonal point s0 * 1,
    so 1 - |grad u|/u > 0 there.

    Attributes:
        r_grid: Sampled radii, refined geometrically toward 1
        d_values: d at each sampled radius
        r_max: Maximizer of d located by golden-section search
        d_max: Maximal gap
        r_cross: Radius where d changes sign from negative to positive
        s0: Diagonal arc length W_r(r_max, pi/4) of the witness point
        u_witness: u(s0 * 1) = U(r_max, pi/4)
        grad_witness: |grad u(s0 * 1)| = r_max
        lambda_defect: 1 - |grad u|/u at the witness
        edge_slope: d'(r) near r = 1 from the product form of U_r
    """
    r_grid: List[float]
    d_values: List[float]
    r_max: float = Field(..., gt=0.0, lt=1.0)
    d_max: float
    r_cross: Optional[float] = None
    s0: float
    u_witness: float
    grad_witness: float
    lambda_defect: float
    edge_slope: float

    @model_validator(mode="after")
    def _check_report(self) -> "DisproofReport":
        if len(self.r_grid) != len(self.d_values):
            raise ValueError("r_grid and d_values differ in length")
        if not (self.d_max > 0.0 and self.lambda_defect > 0.0):
            raise ValueError("the witness gap must be positive")
        return self
