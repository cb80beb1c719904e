"""Nested minimax solver on the fundamental quadrant.

For x in the open unit square the potential is

    u(x) = min_theta max_r f_x(r, theta),   f_x = r (x cos theta + y sin theta) - W(r, theta),

and the saddle point (r*, theta*) is the polar gradient of u at x. The
inner maximum r_x(theta) solves W_r(r, theta) = x cos theta + y sin theta,
the outer minimum is the zero of h_x'(theta) = f_theta(r_x(theta), theta).
Both residuals are strictly monotone, so each solve runs a safeguarded
Newton iteration on a guaranteed bracket.
"""

import math
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from app.core.config import settings
from app.core.constants import Geometry
from app.core.exceptions import DomainError
from app.core.logging_config import solver_logger
from app.core.utils import clamp, squeeze_bounds
from app.schemas.minimax_dto import MinimaxResult, PlanePoint, SolverPolicy
from app.schemas.polar_dto import PolarPoint, SeriesPolicy, WPartials
from app.services.first_approximation import FirstApproximation
from app.services.root_finding import RootResult, safeguarded_newton
from app.services.series_core import SeriesCalculator

# leading term of W_r is (8/pi)(2/3) r^3 sin(2 theta)
_FIRST_TERM_WR = (8.0 / math.pi) * (2.0 / 3.0)

# squeeze width below which the outer solve starts from the cone angle
_CONE_START_WIDTH = 1e-4


class MinimaxSolver:
    """Nested one-dimensional solves for the saddle point of f_x.

    Attributes:
        series_policy: Truncation policy for every series evaluation
        policy: Tolerances of the radial and angular solves
    """

    def __init__(
        self,
        series_policy: Optional[SeriesPolicy] = None,
        solver_policy: Optional[SolverPolicy] = None
    ):
        self.series_policy = series_policy or SeriesPolicy.from_settings(settings)
        self.policy = solver_policy or SolverPolicy.from_settings(settings)

    # ==================== Inner radial solve ====================

    def _radial_root(self, x: float, y: float, theta: float) -> Tuple[RootResult, WPartials]:
        target = x * math.cos(theta) + y * math.sin(theta)
        series_policy = self.series_policy

        def residual(r: float) -> Tuple[float, float]:
            partials = SeriesCalculator.partials(r, theta, series_policy)
            return partials.W_r - target, partials.W_rr

        sin_2theta = math.sin(2.0 * theta)
        guess = None
        if sin_2theta > 0.0:
            guess = (target / (_FIRST_TERM_WR * sin_2theta)) ** (1.0 / 3.0)

        root = safeguarded_newton(
            residual, 0.0, 1.0,
            tol=self.policy.root_tol,
            max_iter=self.policy.max_iter,
            bracket_shrink=self.policy.bracket_shrink,
            guess=guess,
            f_lo=-target,
            f_hi=math.cos(theta) + math.sin(theta) - target,
            name="inner radial solve",
        )
        return root, SeriesCalculator.partials(root.root, theta, series_policy)

    def inner_max_radius(self, point: PlanePoint, theta: float) -> float:
        """
        Radius r_x(theta) maximizing f_x(., theta).

        Args:
            point: Point of the open quadrant
            theta: Angle in (0, pi/2)

        Returns:
            Unique root of W_r(., theta) = x cos theta + y sin theta

        Raises:
            DomainError: If the point or the angle is not interior
            BracketError: If the end residuals do not change sign
        """
        self._require_open(point)
        if not 0.0 < theta < Geometry.HALF_PI:
            raise DomainError("theta", theta, "(0, pi/2)")
        return self._radial_root(point.x, point.y, theta)[0].root

    # ==================== Outer angular solve ====================

    def _angular_derivatives(
        self, x: float, y: float, theta: float
    ) -> Tuple[float, float, RootResult, WPartials]:
        """h_x'(theta) and h_x''(theta) = (r_x')^2 W_rr at an interior angle."""
        root, partials = self._radial_root(x, y, theta)
        r = root.root
        c, s = math.cos(theta), math.sin(theta)
        h1 = r * (-x * s + y * c) - partials.W_theta
        if partials.W_rr > 0.0:
            r_prime = (-x * s + y * c - partials.W_rtheta) / partials.W_rr
            h2 = r_prime * r_prime * partials.W_rr
        else:
            h2 = math.nan
        return h1, h2, root, partials

    def h_prime(self, point: PlanePoint, theta: float) -> Tuple[float, float]:
        """
        Derivatives of h_x(theta) = max_r f_x(r, theta).

        Args:
            point: Point of the open quadrant
            theta: Angle in (0, pi/2)

        Returns:
            Tuple of (h_x', h_x'')
        """
        self._require_open(point)
        if not 0.0 < theta < Geometry.HALF_PI:
            raise DomainError("theta", theta, "(0, pi/2)")
        h1, h2, _, _ = self._angular_derivatives(point.x, point.y, theta)
        return h1, h2

    def outer_min_angle(self, point: PlanePoint) -> float:
        """
        Angle theta* minimizing h_x.

        Args:
            point: Point of the open quadrant

        Returns:
            The unique zero of h_x' in (0, pi/2)

        Raises:
            BracketError: If the end values y - 1 and 1 - x do not change sign
            ConvergenceError: If max_iter is exhausted
        """
        self._require_open(point)
        return self._angular_root(point.x, point.y, {})[0].root

    def _angular_root(
        self, x: float, y: float, evaluated: Dict[float, Tuple[RootResult, WPartials, float]]
    ) -> Tuple[RootResult, int]:
        if x == y:
            return RootResult(Geometry.QUARTER_PI, 0, 0.0), 0

        inner_iters = 0

        def derivative(theta: float) -> Tuple[float, float]:
            nonlocal inner_iters
            h1, h2, root, partials = self._angular_derivatives(x, y, theta)
            inner_iters += root.iterations
            evaluated[theta] = (root, partials, h1)
            return h1, h2

        edge = self.policy.angle_clamp
        lower, upper = squeeze_bounds(x, y)
        if upper - lower < _CONE_START_WIDTH:
            # next to a median theta* sits just below the cone angle
            start = math.atan2(1.0 - y, 1.0 - x)
        else:
            start = FirstApproximation.angle(x, y)
        guess = clamp(start, edge, Geometry.HALF_PI - edge)
        root = safeguarded_newton(
            derivative, edge, Geometry.HALF_PI - edge,
            tol=self.policy.root_tol,
            max_iter=self.policy.max_iter,
            bracket_shrink=self.policy.bracket_shrink,
            guess=guess,
            f_lo=y - 1.0,
            f_hi=1.0 - x,
            name="outer angular solve",
        )
        return root, inner_iters

    # ==================== Composition ====================

    def solve_minimax(self, point: PlanePoint) -> MinimaxResult:
        """
        Saddle point of f_x and the potential value at x.

        Args:
            point: Point of the open quadrant

        Returns:
            MinimaxResult with u = r*(x cos theta* + y sin theta*) - W(r*, theta*)

        Raises:
            DomainError: If the point is not in the open quadrant
            SolverError: Propagated from the one-dimensional solves
            TruncationError: If the saddle lies closer to r = 1 than the term cap
                resolves, which happens only next to a median
        """
        self._require_open(point)
        x, y = point.x, point.y
        lower, upper = squeeze_bounds(x, y)
        if upper - lower <= self.policy.squeeze_tol:
            return self.closed_form_limit(point)

        evaluated: Dict[float, Tuple[RootResult, WPartials, float]] = {}
        angular, inner_iters = self._angular_root(x, y, evaluated)
        theta = angular.root
        if theta in evaluated:
            radial, partials, h1 = evaluated[theta]
        else:
            h1, _, radial, partials = self._angular_derivatives(x, y, theta)
            inner_iters += radial.iterations

        r = radial.root
        target = x * math.cos(theta) + y * math.sin(theta)
        result = MinimaxResult(
            point=point,
            r_star=r,
            theta_star=theta,
            u=r * target - partials.W,
            inner_iters=inner_iters,
            outer_iters=angular.iterations,
            radial_residual=abs(partials.W_r - target),
            angular_residual=abs(h1),
        )
        solver_logger.debug(
            f"Minimax at ({x!r}, {y!r}): r*={r!r}, theta*={theta!r}, "
            f"{angular.iterations} outer / {inner_iters} inner iterations"
        )
        return result

    def closed_form_limit(self, point: PlanePoint) -> MinimaxResult:
        """Squeeze limit next to a median: r* = 1 and u on the lower cone."""
        dx, dy = 1.0 - point.x, 1.0 - point.y
        return MinimaxResult(
            point=point,
            r_star=1.0,
            theta_star=math.atan2(dy, dx),
            u=1.0 - math.hypot(dx, dy),
            closed_form=True,
        )

    def objective(self, point: PlanePoint, r: float, theta: float) -> float:
        """f_x(r, theta) = r(x cos theta + y sin theta) - W(r, theta)."""
        p = PolarPoint.at(r, theta)
        return (
            r * (point.x * math.cos(theta) + point.y * math.sin(theta))
            - SeriesCalculator.eval_W(p, self.series_policy)
        )

    @staticmethod
    def _require_open(point: PlanePoint) -> None:
        if not point.in_open_quadrant:
            raise DomainError("(x, y)", (point.x, point.y), "the open square (0, 1) x (0, 1)")


class DenseGridMinimax:
    """Brute-force minimax: tensor-grid search followed by bounded Brent refinement.

    Independent of the nested solver; it uses only values of W.
    """

    def __init__(
        self,
        n_r: int = 401,
        n_theta: int = 401,
        series_policy: Optional[SeriesPolicy] = None,
        xatol: float = 1e-12
    ):
        self.series_policy = series_policy or SeriesPolicy.from_settings(settings)
        self.r_nodes = np.linspace(0.0, 1.0, n_r)
        self.theta_nodes = np.linspace(0.0, Geometry.HALF_PI, n_theta)
        self.xatol = xatol
        self._W = SeriesCalculator.eval_W_grid(self.r_nodes, self.theta_nodes, self.series_policy)

    def _neighbours(self, nodes: np.ndarray, index: int) -> Tuple[float, float]:
        return float(nodes[max(index - 1, 0)]), float(nodes[min(index + 1, nodes.size - 1)])

    def _max_over_r(self, x: float, y: float, theta: float) -> float:
        slope = x * math.cos(theta) + y * math.sin(theta)
        row = SeriesCalculator.eval_W_grid(self.r_nodes, [theta], self.series_policy)[0]
        i = int(np.argmax(self.r_nodes * slope - row))
        lo, hi = self._neighbours(self.r_nodes, i)

        def negative_f(r: float) -> float:
            return SeriesCalculator.eval_W(PolarPoint(r=r, theta=theta), self.series_policy) - r * slope

        refined = minimize_scalar(negative_f, bounds=(lo, hi), method="bounded", options={"xatol": self.xatol})
        return max(-float(refined.fun), float(self.r_nodes[i] * slope - row[i]))

    def solve(self, point: PlanePoint) -> float:
        """
        Minimax value at a point of the closed quadrant.

        Args:
            point: Point of [0, 1]^2

        Returns:
            min over theta of max over r of f_x
        """
        x, y = point.x, point.y
        values = (
            self.r_nodes[None, :]
            * (x * np.cos(self.theta_nodes)[:, None] + y * np.sin(self.theta_nodes)[:, None])
            - self._W
        )
        j = int(np.argmin(values.max(axis=1)))
        # grid maxima over r shift the coarse argmin by several nodes; h is
        # convex in theta, so the bounded search runs over the whole interval
        refined = minimize_scalar(
            lambda theta: self._max_over_r(x, y, theta),
            bounds=(float(self.theta_nodes[0]), float(self.theta_nodes[-1])),
            method="bounded",
            options={"xatol": self.xatol},
        )
        return min(float(refined.fun), self._max_over_r(x, y, float(self.theta_nodes[j])))
