"""Finite-difference oracle data transfer objects.

Provides the grid specification of the discrete Dirichlet problem, the
converged discrete solution, and its comparison with the analytic field.
"""

from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.constants import Initialization, SweepOrder


class GridSpec(BaseModel):
    """Uniform grid of [0, 2]^2 and the midpoint iteration settings.

    Attributes:
        n: Nodes per side; odd so that (1, 1) is a node
        stencil_radius: Radius of the discrete ball, in grid cells
        sweep_tol: Largest nodal update that declares convergence
        max_sweeps: Sweep cap
        sweep_order: Jacobi or red-black updates
        initialization: Starting iterate on free nodes
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=17, description="Nodes per side (odd)")
    stencil_radius: int = Field(default=3, ge=1)
    sweep_tol: float = Field(default=1e-10, gt=0.0)
    max_sweeps: int = Field(default=1_000_000, ge=1)
    sweep_order: SweepOrder = SweepOrder.JACOBI
    initialization: Initialization = Initialization.LOWER_BOUND

    @field_validator("n")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"n={value} must be odd so the center is a node")
        return value

    @property
    def spacing(self) -> float:
        return 2.0 / (self.n - 1)

    @property
    def center_index(self) -> int:
        return (self.n - 1) // 2


class DiscreteSolution(BaseModel):
    """Converged nodal values, indexed values[j, i] at (x_i, y_j).

    Attributes:
        spec: Grid that was solved
        values: Nodal values
        sweeps: Sweeps performed
        last_update: Largest nodal change of the final sweep
        residual: Largest change one further Jacobi application would make
        stayed_in_unit_interval: True when every iterate stayed in [0, 1]
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    spec: GridSpec
    values: np.ndarray
    sweeps: int
    last_update: float
    residual: float
    stayed_in_unit_interval: bool = True

    @property
    def coordinates(self) -> np.ndarray:
        return np.linspace(0.0, 2.0, self.spec.n)


class FieldComparison(BaseModel):
    """Discrete against analytic potential on the oracle grid.

    Attributes:
        n: Nodes per side
        stencil_radius: Ball radius used
        sup_gap: Largest absolute nodal gap
        l2_gap: Root-mean-square nodal gap
        worst_node: Coordinates of the largest gap
        sweeps: Sweeps of the discrete solve
        gap_heatmap: Signed gap (discrete - analytic), rows in y
    """
    n: int
    stencil_radius: int
    sup_gap: float = Field(..., ge=0.0)
    l2_gap: float = Field(..., ge=0.0)
    worst_node: Tuple[float, float]
    sweeps: int
    gap_heatmap: List[List[float]]
