"""Potential field on the whole square [0, 2]^2.

Every point is folded into the fundamental quadrant by x -> min(x, 2 - x),
y -> min(y, 2 - y) and sorted so that a <= b. Only that representative is
solved; values are even under the folds and gradients pick up one sign per
reflection and a component swap when the coordinates were sorted.

Regions of the folded representative (a, b):
    boundary  a = 0
    center    a = b = 1
    median    b = 1
    diagonal  a = b
    interior  everything else
"""

import math
from functools import lru_cache
from typing import NamedTuple, Optional, Tuple

from app.core.config import Settings, settings
from app.core.constants import Geometry, RegionTag
from app.core.exceptions import (
    ConvergenceError,
    DomainError,
    FieldError,
    HessianUndefinedError,
    SingularHessianError,
    TruncationError,
    UndefinedGradientError,
)
from app.core.logging_config import field_logger
from app.core.utils import squeeze_bounds
from app.schemas.field_dto import DiagonalValue, FieldSample, Matrix, Vector
from app.schemas.minimax_dto import MinimaxResult, PlanePoint
from app.schemas.polar_dto import WPartials
from app.services.minimax_solver import MinimaxSolver
from app.services.root_finding import safeguarded_newton
from app.services.series_core import SeriesCalculator

_K = 8.0 / math.pi


class FoldedPoint(NamedTuple):
    """Representative of a point in the sorted fundamental triangle.

    Attributes:
        a: Smaller folded coordinate
        b: Larger folded coordinate
        sign_x: -1 when x was reflected by x -> 2 - x
        sign_y: -1 when y was reflected by y -> 2 - y
        swapped: True when the folded coordinates were exchanged
    """
    a: float
    b: float
    sign_x: float
    sign_y: float
    swapped: bool


def fold(point: PlanePoint) -> FoldedPoint:
    """Fold a point of the square into 0 <= a <= b <= 1."""
    fx, sign_x = (point.x, 1.0) if point.x <= Geometry.CENTER else (Geometry.SIDE - point.x, -1.0)
    fy, sign_y = (point.y, 1.0) if point.y <= Geometry.CENTER else (Geometry.SIDE - point.y, -1.0)
    if fx <= fy:
        return FoldedPoint(fx, fy, sign_x, sign_y, False)
    return FoldedPoint(fy, fx, sign_x, sign_y, True)


def unfold_vector(folded: FoldedPoint, va: float, vb: float) -> Vector:
    """Map a sorted-frame vector back to the frame of the original point."""
    vx, vy = (vb, va) if folded.swapped else (va, vb)
    return folded.sign_x * vx, folded.sign_y * vy


def unfold_matrix(folded: FoldedPoint, h_aa: float, h_ab: float, h_bb: float) -> Matrix:
    """Map a sorted-frame symmetric matrix back to the original frame."""
    h_xx, h_yy = (h_bb, h_aa) if folded.swapped else (h_aa, h_bb)
    h_xy = folded.sign_x * folded.sign_y * h_ab
    return ((h_xx, h_xy), (h_xy, h_yy))


def polar_hessian(partials: WPartials) -> Tuple[float, float, float]:
    """
    Hessian of u at the point whose gradient is (r cos theta, r sin theta).

    The Hessian of the Legendre dual w is assembled from W_rr and
    U_theta = r W_rtheta - W_theta and inverted in closed form.

    Returns:
        Tuple of (u_xx, u_xy, u_yy) in the frame of the polar angle
    """
    r, theta = partials.r, partials.theta
    c, s = math.cos(theta), math.sin(theta)
    a = r * r * partials.W_rr
    b = partials.U_theta
    scale = r * r / (b * b)
    h_xx = -scale * (s * s * a + 2.0 * s * c * b)
    h_xy = scale * (s * c * a + (c * c - s * s) * b)
    h_yy = -scale * (c * c * a - 2.0 * s * c * b)
    return h_xx, h_xy, h_yy


class PotentialField:
    """Glued potential on the square with region dispatch.

    Attributes:
        solver: Minimax solver on the fundamental quadrant
        line_tol: Distance below which a point lies on a diagonal, median or side
        hessian_guard: Distance to a diagonal or median below which the Hessian is refused
        median_fallback_band: Distance to a median inside which a truncation or
            convergence failure falls back to the squeeze limit
    """

    def __init__(self, solver: Optional[MinimaxSolver] = None, cfg: Settings = settings):
        self.solver = solver or MinimaxSolver()
        self.series_policy = self.solver.series_policy
        self.line_tol = cfg.FIELD_LINE_TOL
        self.hessian_guard = cfg.FIELD_HESSIAN_GUARD
        self.median_fallback_band = cfg.FIELD_MEDIAN_FALLBACK_BAND
        self._solve_sorted = lru_cache(maxsize=cfg.FIELD_CACHE_SIZE)(self._solve_uncached)

    # ==================== Dispatch ====================

    def _region_of(self, folded: FoldedPoint) -> RegionTag:
        tol = self.line_tol
        if folded.a <= tol:
            return RegionTag.BOUNDARY
        if folded.a >= Geometry.CENTER - tol:
            return RegionTag.CENTER
        if folded.b >= Geometry.CENTER - tol:
            return RegionTag.MEDIAN
        if (folded.b - folded.a) / Geometry.SQRT2 <= tol:
            return RegionTag.DIAGONAL
        return RegionTag.INTERIOR

    def classify_region(self, point: PlanePoint) -> RegionTag:
        """Region tag of a point of the square."""
        return self._region_of(fold(point))

    def _solve_uncached(self, a: float, b: float) -> MinimaxResult:
        point = PlanePoint(x=a, y=b)
        try:
            return self.solver.solve_minimax(point)
        except (TruncationError, ConvergenceError) as exc:
            if Geometry.CENTER - b >= self.median_fallback_band:
                raise
            field_logger.warning(
                f"{type(exc).__name__} at ({a!r}, {b!r}) next to a median; "
                f"using the squeeze limit"
            )
            return self.solver.closed_form_limit(point)

    def solve_folded(self, folded: FoldedPoint) -> MinimaxResult:
        """Minimax result of the sorted representative, cached."""
        return self._solve_sorted(folded.a, folded.b)

    # ==================== Values ====================

    def eval_u(self, point: PlanePoint) -> float:
        """
        Potential value at a point of the square.

        Args:
            point: Point of [0, 2]^2

        Returns:
            u in [0, 1]
        """
        folded = fold(point)
        region = self._region_of(folded)
        if region is RegionTag.BOUNDARY:
            return 0.0
        if region is RegionTag.CENTER:
            return 1.0
        if region is RegionTag.MEDIAN:
            return folded.a
        if region is RegionTag.DIAGONAL:
            return self.diagonal_value((folded.a + folded.b) / Geometry.SQRT2).u
        return self.solve_folded(folded).u

    def lower_bound(self, point: PlanePoint) -> float:
        """Cone 1 - |x - (1, 1)|."""
        return squeeze_bounds(point.x, point.y)[0]

    def upper_bound(self, point: PlanePoint) -> float:
        """Distance to the outer boundary."""
        return squeeze_bounds(point.x, point.y)[1]

    # ==================== Gradient ====================

    def eval_grad(self, point: PlanePoint) -> Vector:
        """
        Gradient of the glued potential.

        Args:
            point: Point of [0, 2]^2 other than the center and the four outer corners

        Returns:
            (u_x, u_y)

        Raises:
            UndefinedGradientError: At the center and the outer corners
        """
        folded = fold(point)
        region = self._region_of(folded)
        if region is RegionTag.CENTER:
            raise UndefinedGradientError(point.x, point.y, "the puncture (1, 1)")
        if region is RegionTag.BOUNDARY:
            if folded.b <= self.line_tol:
                raise UndefinedGradientError(point.x, point.y, "outer corner of the square")
            return unfold_vector(folded, self.boundary_gradient_magnitude(folded.b), 0.0)
        if region is RegionTag.MEDIAN:
            return unfold_vector(folded, 1.0, 0.0)
        if region is RegionTag.DIAGONAL:
            g = self.diagonal_value((folded.a + folded.b) / Geometry.SQRT2).g
            component = g / Geometry.SQRT2
            return unfold_vector(folded, component, component)
        ga, gb = self.solve_folded(folded).grad
        return unfold_vector(folded, ga, gb)

    def boundary_gradient_magnitude(self, t: float) -> float:
        """
        Inward normal derivative on a side at tangential folded coordinate t.

        The point (0, t) has gradient (p, 0) where W_theta(p, 0)/p = t; the
        map p -> W_theta(p, 0)/p increases with slope U_theta(p, 0)/p^2.

        Args:
            t: Distance along the side from the nearer outer corner, in (0, 1]

        Returns:
            p in (0, 1]
        """
        if not 0.0 < t <= 1.0:
            raise DomainError("t", t, "(0, 1]")
        if t >= 1.0 - self.line_tol:
            return 1.0
        policy = self.series_policy

        def residual(p: float) -> Tuple[float, float]:
            if p >= policy.boundary_snap:
                return 1.0 - t, math.nan
            try:
                partials = SeriesCalculator.partials(p, 0.0, policy)
            except TruncationError:
                return 1.0 - t, math.nan
            return partials.W_theta / p - t, partials.U_theta / (p * p)

        root = safeguarded_newton(
            residual, 0.0, 1.0,
            tol=self.solver.policy.root_tol,
            max_iter=self.solver.policy.max_iter,
            bracket_shrink=self.solver.policy.bracket_shrink,
            guess=(3.0 * t / _K) ** (1.0 / 3.0),
            f_lo=-t,
            f_hi=1.0 - t,
            name="boundary gradient solve",
        )
        return root.root

    # ==================== Hessian ====================

    def eval_hessian(self, point: PlanePoint) -> Matrix:
        """
        Hessian of u off the diagonals, medians, sides and center.

        Args:
            point: Interior point of a quadrant, off its diagonal

        Returns:
            Symmetric 2x2 matrix

        Raises:
            SingularHessianError: On or within the guard distance of a diagonal
            HessianUndefinedError: On a median, side or the center, or within the guard of a median
        """
        folded = fold(point)
        region = self._region_of(folded)
        distance = (folded.b - folded.a) / Geometry.SQRT2
        if region is RegionTag.DIAGONAL or (region is RegionTag.INTERIOR and distance < self.hessian_guard):
            raise SingularHessianError(point.x, point.y, distance, self.hessian_guard)
        if region is not RegionTag.INTERIOR:
            raise HessianUndefinedError(point.x, point.y, region.value)
        if Geometry.CENTER - folded.b < self.hessian_guard:
            raise HessianUndefinedError(point.x, point.y, "median guard band")

        result = self.solve_folded(folded)
        if result.closed_form:
            raise HessianUndefinedError(point.x, point.y, "median squeeze limit")
        partials = SeriesCalculator.partials(result.r_star, result.theta_star, self.series_policy)
        return unfold_matrix(folded, *polar_hessian(partials))

    def diagonal_transverse_second_derivative(self, s: float, offset: float) -> float:
        """
        Second derivative of c(t) = u(x0 + t 1perp) at t = offset.

        x0 = (s/sqrt(2)) (1, 1) is a diagonal point and 1perp = (1, -1)/sqrt(2).
        The value equals 1perp^T Hu 1perp and diverges to -infinity as the
        offset tends to zero.

        Args:
            s: Arc length of the base point along the diagonal
            offset: Signed distance from the diagonal

        Returns:
            c''(offset)
        """
        if abs(offset) < self.hessian_guard:
            x0 = s / Geometry.SQRT2
            raise SingularHessianError(x0, x0, abs(offset), self.hessian_guard)
        x = (s + offset) / Geometry.SQRT2
        y = (s - offset) / Geometry.SQRT2
        point = PlanePoint.at(x, y)
        if not point.in_open_quadrant:
            raise DomainError("(s, offset)", (s, offset), "offsets staying inside the open quadrant")
        folded = fold(point)
        result = self.solve_folded(folded)
        if result.closed_form:
            raise HessianUndefinedError(x, y, "median squeeze limit")
        partials = SeriesCalculator.partials(result.r_star, result.theta_star, self.series_policy)
        r = partials.r
        c, sn = math.cos(partials.theta), math.sin(partials.theta)
        a = r * r * partials.W_rr
        b = partials.U_theta
        return -r * r * (a * (c + sn) ** 2 + 2.0 * (c * c - sn * sn) * b) / (2.0 * b * b)

    # ==================== Diagonal ====================

    def diagonal_value(self, s: float) -> DiagonalValue:
        """
        Potential and gradient magnitude on the diagonal.

        g(s) inverts the increasing map r -> W_r(r, pi/4) and
        u(s 1) = s g(s) - W(g(s), pi/4).

        Args:
            s: Arc length in [0, sqrt(2)]

        Returns:
            DiagonalValue with g'(s) = 1/W_rr(g(s), pi/4) in the open range
        """
        if not 0.0 <= s <= Geometry.SQRT2 + self.line_tol:
            raise DomainError("s", s, "[0, sqrt(2)]")
        if s == 0.0:
            return DiagonalValue(s=0.0, g_of_s=0.0, u=0.0)
        if s >= Geometry.SQRT2 - self.line_tol:
            return DiagonalValue(s=Geometry.SQRT2, g_of_s=1.0, u=1.0)

        policy = self.series_policy
        theta = Geometry.QUARTER_PI

        def residual(r: float) -> Tuple[float, float]:
            try:
                partials = SeriesCalculator.partials(r, theta, policy)
            except TruncationError:
                return Geometry.SQRT2 - s, math.nan
            return partials.W_r - s, partials.W_rr

        root = safeguarded_newton(
            residual, 0.0, 1.0,
            tol=self.solver.policy.root_tol,
            max_iter=self.solver.policy.max_iter,
            bracket_shrink=self.solver.policy.bracket_shrink,
            guess=(s / (_K * 2.0 / 3.0)) ** (1.0 / 3.0),
            f_lo=-s,
            f_hi=Geometry.SQRT2 - s,
            name="diagonal inverse",
        )
        g = root.root
        try:
            partials = SeriesCalculator.partials(g, theta, policy)
        except TruncationError as exc:
            raise FieldError(
                f"diagonal value at s={s!r} needs r={g!r} inside the truncation band",
                {"s": s, "r": g},
            ) from exc
        u = min(max(s * g - partials.W, 0.0), 1.0)
        g_prime = 1.0 / partials.W_rr if partials.W_rr > 0.0 else None
        return DiagonalValue(s=s, g_of_s=g, u=u, g_prime=g_prime)

    # ==================== Samples ====================

    def sample(self, point: PlanePoint, include_hessian: bool = True) -> FieldSample:
        """
        Value, gradient and Hessian record of one point.

        Args:
            point: Point of [0, 2]^2
            include_hessian: Evaluate the Hessian where it exists

        Returns:
            FieldSample with hessian_note explaining an absent Hessian
        """
        region = self.classify_region(point)
        u = self.eval_u(point)
        try:
            grad = self.eval_grad(point)
        except UndefinedGradientError:
            grad = None

        hessian = None
        note = None
        if not include_hessian:
            note = "not requested"
        else:
            try:
                hessian = self.eval_hessian(point)
            except (SingularHessianError, HessianUndefinedError) as exc:
                note = exc.message
        return FieldSample(point=point, u=u, grad=grad, hessian=hessian, hessian_note=note, region_tag=region)
