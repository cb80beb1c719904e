"""Discrete infinity-Laplace solve on a uniform grid of [0, 2]^2.

Each free node sees its neighbours along the primitive lattice directions
of a disk of ``stencil_radius`` cells. A direction that leaves the square
stops at the side, where the neighbour is the boundary point itself (value
0) at its true distance. The node value is the distance-weighted
interpolant of the pair (j, k) with the steepest slope
(u_j - u_k) / (d_j + d_k). The update is monotone in every neighbour
value, so iterates obey the discrete maximum principle and converge to the
unique fixed point with u = 0 on the sides and u = 1 at the center node.
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.core.constants import Initialization, SweepOrder
from app.core.exceptions import MaximumPrincipleError, SweepConvergenceError
from app.core.logging_config import oracle_logger
from app.schemas.minimax_dto import PlanePoint
from app.schemas.oracle_dto import DiscreteSolution, FieldComparison, GridSpec
from app.services.potential_field import PotentialField

SweepObserver = Callable[[int, np.ndarray], None]
Offset = Tuple[int, int]

_PROGRESS_EVERY = 10_000


def _reach(index: np.ndarray, step: int, n: int) -> np.ndarray:
    """Fraction of one ``step`` that fits before the side at index 0 or n - 1."""
    room = (n - 1 - index) if step > 0 else index
    return np.minimum(1.0, room / abs(step))


class InfinityLaplaceOracle:
    """Direction-stencil oracle for the punctured square.

    Attributes:
        field: Analytic field compared against
    """

    def __init__(self, field: Optional[PotentialField] = None):
        self.field = field or PotentialField()

    @staticmethod
    def stencil_offsets(radius: int) -> List[Offset]:
        """Primitive lattice directions (a, b) with a^2 + b^2 <= radius^2."""
        return [
            (a, b)
            for b in range(-radius, radius + 1)
            for a in range(-radius, radius + 1)
            if (a, b) != (0, 0) and a * a + b * b <= radius * radius and math.gcd(a, b) == 1
        ]

    @classmethod
    def stencil_distances(cls, spec: GridSpec, offsets: List[Offset]) -> np.ndarray:
        """
        Distance from every node to each stencil neighbour.

        A direction that crosses a side is cut at the side. Pinned nodes
        carry the full step; their update is never used.

        Returns:
            Array of shape (len(offsets), n, n)
        """
        index = np.arange(spec.n)
        pinned = cls._pinned_mask(spec)
        distances = np.empty((len(offsets), spec.n, spec.n))
        for s, (a, b) in enumerate(offsets):
            reach = np.ones((spec.n, spec.n))
            if a:
                reach = np.minimum(reach, _reach(index, a, spec.n)[None, :])
            if b:
                reach = np.minimum(reach, _reach(index, b, spec.n)[:, None])
            reach[pinned] = 1.0
            distances[s] = reach * math.hypot(a, b) * spec.spacing
        return distances

    @staticmethod
    def _neighbour_values(values: np.ndarray, offsets: List[Offset], radius: int) -> np.ndarray:
        # a cut direction lands in the zero padding, which is the side value
        n = values.shape[0]
        padded = np.pad(values, radius)
        return np.stack(
            [padded[radius + b:radius + b + n, radius + a:radius + a + n] for a, b in offsets]
        )

    @classmethod
    def _stencil_update(cls, values: np.ndarray, offsets: List[Offset],
                        distances: np.ndarray, radius: int) -> np.ndarray:
        neighbours = cls._neighbour_values(values, offsets, radius)
        steepest = np.full(values.shape, -np.inf)
        update = values.copy()
        for j in range(len(offsets)):
            slopes = (neighbours[j] - neighbours) / (distances[j] + distances)
            k = np.argmax(slopes, axis=0)[None]
            slope = np.take_along_axis(slopes, k, axis=0)[0]
            d_k = np.take_along_axis(distances, k, axis=0)[0]
            u_k = np.take_along_axis(neighbours, k, axis=0)[0]
            candidate = (d_k * neighbours[j] + distances[j] * u_k) / (distances[j] + d_k)
            update = np.where(slope > steepest, candidate, update)
            steepest = np.maximum(steepest, slope)
        return update

    @staticmethod
    def _pinned_mask(spec: GridSpec) -> np.ndarray:
        pinned = np.zeros((spec.n, spec.n), dtype=bool)
        pinned[0, :] = pinned[-1, :] = pinned[:, 0] = pinned[:, -1] = True
        pinned[spec.center_index, spec.center_index] = True
        return pinned

    @staticmethod
    def initial_values(spec: GridSpec) -> np.ndarray:
        """Starting iterate with the pinned data applied."""
        coords = np.linspace(0.0, 2.0, spec.n)
        xx, yy = np.meshgrid(coords, coords)
        if spec.initialization is Initialization.ONES:
            values = np.ones((spec.n, spec.n))
        else:
            values = np.clip(1.0 - np.hypot(1.0 - xx, 1.0 - yy), 0.0, 1.0)
        values[0, :] = values[-1, :] = values[:, 0] = values[:, -1] = 0.0
        values[spec.center_index, spec.center_index] = 1.0
        return values

    def solve_discrete(self, spec: GridSpec, on_sweep: Optional[SweepObserver] = None) -> DiscreteSolution:
        """
        Iterate the stencil update to its fixed point.

        Args:
            spec: Grid and iteration settings
            on_sweep: Called with (sweep, values) after every sweep

        Returns:
            DiscreteSolution with values[j, i] at (x_i, y_j)

        Raises:
            SweepConvergenceError: If max_sweeps is reached first
            MaximumPrincipleError: If an iterate leaves [0, 1]
        """
        offsets = self.stencil_offsets(spec.stencil_radius)
        distances = self.stencil_distances(spec, offsets)
        radius = spec.stencil_radius
        free = ~self._pinned_mask(spec)
        values = self.initial_values(spec)

        if spec.sweep_order is SweepOrder.RED_BLACK:
            parity = np.add.outer(np.arange(spec.n), np.arange(spec.n)) % 2
            classes = [free & (parity == 0), free & (parity == 1)]
        else:
            classes = [free]

        oracle_logger.info(
            f"Discrete solve: n={spec.n}, radius={spec.stencil_radius}, "
            f"order={spec.sweep_order.value}, start={spec.initialization.value}"
        )
        update = math.inf
        sweep = 0
        while sweep < spec.max_sweeps:
            sweep += 1
            update = 0.0
            for mask in classes:
                proposal = self._stencil_update(values, offsets, distances, radius)
                change = np.abs(proposal[mask] - values[mask])
                update = max(update, float(change.max()))
                values[mask] = proposal[mask]

            low, high = float(values.min()), float(values.max())
            if low < 0.0 or high > 1.0:
                raise MaximumPrincipleError(sweep, low, high)
            if on_sweep is not None:
                on_sweep(sweep, values)
            if sweep % _PROGRESS_EVERY == 0:
                oracle_logger.info(f"Sweep {sweep}: largest update {update!r}")
            if update < spec.sweep_tol:
                break
        else:
            raise SweepConvergenceError(sweep, update)

        residual = float(np.abs(self._stencil_update(values, offsets, distances, radius)[free] - values[free]).max())
        oracle_logger.info(f"Discrete solve converged after {sweep} sweeps, residual {residual!r}")
        return DiscreteSolution(
            spec=spec,
            values=values,
            sweeps=sweep,
            last_update=update,
            residual=residual,
            stayed_in_unit_interval=True,
        )

    def analytic_values(self, spec: GridSpec) -> np.ndarray:
        """eval_u at every node, indexed like DiscreteSolution.values."""
        coords = np.linspace(0.0, 2.0, spec.n)
        analytic = np.empty((spec.n, spec.n))
        for j, y in enumerate(coords):
            for i, x in enumerate(coords):
                analytic[j, i] = self.field.eval_u(PlanePoint(x=float(x), y=float(y)))
        return analytic

    def compare_fields(self, spec: GridSpec, solution: Optional[DiscreteSolution] = None) -> FieldComparison:
        """
        Discrete against analytic potential at every node.

        Args:
            spec: Grid specification
            solution: Converged solve of ``spec``; computed when absent

        Returns:
            FieldComparison with signed gaps discrete - analytic
        """
        solution = solution or self.solve_discrete(spec)
        gap = solution.values - self.analytic_values(spec)
        magnitude = np.abs(gap)
        j, i = np.unravel_index(int(np.argmax(magnitude)), magnitude.shape)
        coords = solution.coordinates
        return FieldComparison(
            n=spec.n,
            stencil_radius=spec.stencil_radius,
            sup_gap=float(magnitude.max()),
            l2_gap=float(np.sqrt(np.mean(gap * gap))),
            worst_node=(float(coords[i]), float(coords[j])),
            sweeps=solution.sweeps,
            gap_heatmap=gap.tolist(),
        )
