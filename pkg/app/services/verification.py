"""Invariant suites.

Every identity and inequality the services are built on is measured here
and reported as a named CheckResult; the command line turns a report into
an exit code.
"""

import math
from typing import Callable, Dict, List, Optional

import numpy as np

from app.core.constants import (
    Geometry,
    SeriesConstants,
    SeriesForm,
    VerificationTolerances as Tol,
    VerifySuite,
)
from app.core.exceptions import ApplicationError
from app.core.logging_config import verification_logger
from app.core.utils import halton_points
from app.schemas.cli_dto import CheckResult, VerificationReport
from app.schemas.minimax_dto import PlanePoint
from app.schemas.polar_dto import PolarPoint
from app.services.analysis import AnalysisService
from app.services.minimax_solver import DenseGridMinimax
from app.services.potential_field import PotentialField, fold
from app.services.series_core import SeriesCalculator

_PERP = (1.0 / Geometry.SQRT2, -1.0 / Geometry.SQRT2)


def _upper_check(name: str, measured: float, tolerance: float, detail: Optional[str] = None) -> CheckResult:
    """Passes when measured <= tolerance."""
    return CheckResult(
        name=name, passed=bool(measured <= tolerance), measured=float(measured),
        tolerance=float(tolerance), detail=detail,
    )


def _lower_check(name: str, measured: float, threshold: float, detail: Optional[str] = None) -> CheckResult:
    """Passes when measured > threshold."""
    return CheckResult(
        name=name, passed=bool(measured > threshold), measured=float(measured),
        tolerance=float(threshold), detail=detail,
    )


def _extrapolated(difference: Callable[[float], float], step: float) -> float:
    """Richardson extrapolation of a second-order difference quotient."""
    return (4.0 * difference(0.5 * step) - difference(step)) / 3.0


def _lattice(count: int = 9) -> List[PlanePoint]:
    """count x count lattice of the open unit square."""
    step = 1.0 / (count + 1)
    return [
        PlanePoint(x=i * step, y=j * step)
        for j in range(1, count + 1)
        for i in range(1, count + 1)
    ]


class VerificationRunner:
    """Runs the invariant suites against one configured field.

    Attributes:
        field: Potential field under test
        analysis: Analysis service under test
        sample_count: Quasi-random points per sampled invariant
        dense_grid_size: Resolution of the brute-force minimax oracle
    """

    def __init__(
        self,
        field: Optional[PotentialField] = None,
        analysis: Optional[AnalysisService] = None,
        sample_count: int = 1000,
        dense_grid_size: int = 401
    ):
        self.field = field or PotentialField()
        self.solver = self.field.solver
        self.series_policy = self.field.series_policy
        self.analysis = analysis or AnalysisService(self.series_policy)
        self.sample_count = sample_count
        self.dense_grid_size = dense_grid_size

    def run(self, suite: VerifySuite = VerifySuite.ALL) -> VerificationReport:
        """
        Run one suite or all of them.

        Args:
            suite: Suite selector

        Returns:
            VerificationReport, passed only if every check passed
        """
        suites: Dict[VerifySuite, Callable[[], List[CheckResult]]] = {
            VerifySuite.SERIES: self.series_checks,
            VerifySuite.MINIMAX: self.minimax_checks,
            VerifySuite.FIELD: self.field_checks,
            VerifySuite.ANALYSIS: self.analysis_checks,
        }
        selected = list(suites) if suite is VerifySuite.ALL else [VerifySuite(suite)]

        checks: List[CheckResult] = []
        for name in selected:
            verification_logger.info(f"Running suite '{name.value}'")
            for check in self._guarded(suites[name]):
                if not check.passed:
                    verification_logger.warning(
                        f"Check failed: {check.name} (measured {check.measured!r}, tolerance {check.tolerance!r})"
                    )
                checks.append(check)
        return VerificationReport(
            suite=VerifySuite(suite).value,
            passed=all(check.passed for check in checks),
            checks=checks,
        )

    @staticmethod
    def _guarded(producer: Callable[[], List[CheckResult]]) -> List[CheckResult]:
        try:
            return producer()
        except ApplicationError as exc:
            verification_logger.error(f"Suite aborted: {exc.message}")
            return [CheckResult(name=producer.__name__, passed=False, detail=exc.message)]

    # ==================== Series ====================

    def _polar_samples(self, r_high: float = 0.999) -> List[PolarPoint]:
        points = halton_points(self.sample_count, (0.0, 0.0), (r_high, Geometry.HALF_PI))
        return [PolarPoint(r=float(r), theta=float(t)) for r, t in points]

    def series_checks(self) -> List[CheckResult]:
        policy = self.series_policy
        samples = self._polar_samples()
        records = [SeriesCalculator.eval_W_partials(p, policy) for p in samples]

        smallest = min(min(rec.W, rec.W_r, rec.W_rr) for rec in records)
        pde = max(abs(rec.r * rec.W_r + rec.W_thetatheta) for rec in records)
        sign = min(
            rec.U_theta * (Geometry.QUARTER_PI - rec.theta)
            for rec in records if rec.theta != Geometry.QUARTER_PI
        )

        theta2_gap = 0.0
        for q in (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99):
            for z in np.linspace(0.0, math.pi, 33):
                series = SeriesCalculator.eval_theta2(float(z), q, SeriesForm.SERIES, policy)
                product = SeriesCalculator.eval_theta2(float(z), q, SeriesForm.PRODUCT, policy)
                theta2_gap = max(theta2_gap, abs(series - product))

        identity_gap = max(
            abs(rec.U_theta - SeriesConstants.THETA_PREFACTOR * SeriesCalculator.eval_theta2(
                2.0 * rec.theta, rec.r ** SeriesConstants.NOME_POWER, policy=policy))
            for rec in records if rec.r <= 0.99
        )

        fourier_gap = max(
            abs(SeriesCalculator.boundary_W_theta(float(t)) - SeriesCalculator.boundary_fourier_W_theta(float(t)))
            for t in np.linspace(0.05, Geometry.HALF_PI - 0.05, 25)
        )

        extended_gap = 0.0
        for r in (0.5, 0.9, 0.99, 0.999):
            for theta in (0.3, Geometry.QUARTER_PI, 1.2):
                p = PolarPoint(r=r, theta=theta)
                extended_gap = max(
                    extended_gap,
                    abs(SeriesCalculator.eval_W(p, policy) - SeriesCalculator.eval_W_extended(p)),
                )

        forms_gap = max(
            abs(SeriesCalculator.eval_Ur_diagonal(r, policy, SeriesForm.SERIES)
                - SeriesCalculator.eval_Ur_diagonal(r, policy, SeriesForm.PRODUCT))
            for r in (0.3, 0.6, 0.9, 0.95, 0.99)
        )
        edge = SeriesCalculator.eval_Ur_diagonal(0.9999, policy, SeriesForm.PRODUCT)

        return [
            _lower_check("W, W_r, W_rr > 0", smallest, 0.0, f"{len(records)} quasi-random points"),
            _upper_check("PDE residual r W_r + W_thetatheta < 1e-10", pde, Tol.PDE_RESIDUAL),
            _lower_check("U_theta changes sign only at pi/4", sign, 0.0),
            _upper_check("θ₂ series/product agree", theta2_gap, Tol.THETA2_AGREEMENT),
            _upper_check("U_theta = (4/pi) theta2(2 theta, r^16)", identity_gap, Tol.THETA_IDENTITY),
            _upper_check("boundary Fourier series of |cos| - |sin|", fourier_gap, Tol.BOUNDARY_FOURIER),
            _upper_check("extended precision agreement of W", extended_gap, Tol.EXTENDED_PRECISION),
            _upper_check("U_r(r, pi/4) series/product agree", forms_gap, Tol.UR_FORMS),
            _upper_check("U_r(0.9999, pi/4) < 1e-3", edge, Tol.UR_EDGE),
        ]

    # ==================== Minimax ====================

    def minimax_checks(self) -> List[CheckResult]:
        solver = self.solver
        lattice = _lattice()
        results = {(p.x, p.y): solver.solve_minimax(p) for p in lattice}

        first_order = max(max(res.radial_residual, res.angular_residual) for res in results.values())

        swap = max(
            abs(res.theta_star + results[(y, x)].theta_star - Geometry.HALF_PI)
            for (x, y), res in results.items()
        )

        saddle_gap = 0.0
        saddle_min = math.inf
        step = 1e-6
        for p in lattice[::7]:
            if p.x == p.y:
                continue
            theta = results[(p.x, p.y)].theta_star
            _, h2 = solver.h_prime(p, theta)
            fd = (solver.h_prime(p, theta + step)[0] - solver.h_prime(p, theta - step)[0]) / (2.0 * step)
            saddle_min = min(saddle_min, h2)
            saddle_gap = max(saddle_gap, abs(fd - h2) / max(abs(h2), 1.0))

        oracle = DenseGridMinimax(self.dense_grid_size, self.dense_grid_size, self.series_policy)
        dense_gap = max(abs(res.u - oracle.solve(res.point)) for res in results.values())

        h = Tol.GRADIENT_FD_STEP
        gradient_gap = 0.0
        for p in lattice:
            if abs(p.x - p.y) < 0.15:
                continue
            gx, gy = results[(p.x, p.y)].grad
            ux = (solver.solve_minimax(PlanePoint(x=p.x + h, y=p.y)).u
                  - solver.solve_minimax(PlanePoint(x=p.x - h, y=p.y)).u) / (2.0 * h)
            uy = (solver.solve_minimax(PlanePoint(x=p.x, y=p.y + h)).u
                  - solver.solve_minimax(PlanePoint(x=p.x, y=p.y - h)).u) / (2.0 * h)
            gradient_gap = max(gradient_gap, abs(ux - gx), abs(uy - gy))

        diagonal = [self.field.diagonal_value(s).u for s in np.linspace(0.0, Geometry.SQRT2, 101)]
        increase = min(b - a for a, b in zip(diagonal, diagonal[1:]))

        tol = Tol.FIRST_ORDER_FACTOR * solver.policy.root_tol
        return [
            _upper_check("first-order conditions at the saddle", first_order, tol),
            _upper_check("theta*(x, y) + theta*(y, x) = pi/2", swap, Tol.SWAP_SYMMETRY),
            _lower_check("h'' >= 0 at theta*", saddle_min, -tol),
            _upper_check("h'' matches finite differences of h'", saddle_gap, 1e-4),
            _upper_check("dense-grid minimax agreement", dense_gap, Tol.DENSE_GRID,
                         f"{self.dense_grid_size} x {self.dense_grid_size} grid with Brent refinement"),
            _upper_check("gradient matches central differences", gradient_gap, Tol.GRADIENT_FD),
            _lower_check("u increases along the diagonal", increase, 0.0),
        ]

    # ==================== Field ====================

    def _interior_samples(self, count: int) -> List[PlanePoint]:
        points = halton_points(count, (0.05, 0.05), (0.95, 0.95))
        return [PlanePoint(x=float(x), y=float(y)) for x, y in points if abs(x - y) > 1e-2]

    def field_checks(self) -> List[CheckResult]:
        field = self.field

        side = np.linspace(0.0, 2.0, 101)
        boundary = [PlanePoint(x=float(t), y=0.0) for t in side] + [PlanePoint(x=float(t), y=2.0) for t in side]
        boundary += [PlanePoint(x=0.0, y=float(t)) for t in side] + [PlanePoint(x=2.0, y=float(t)) for t in side]
        boundary_value = max(abs(field.eval_u(p)) for p in boundary)
        center = field.eval_u(PlanePoint(x=1.0, y=1.0))

        violation = -math.inf
        symmetry = 0.0
        for y in np.linspace(0.0, 2.0, 101):
            for x in np.linspace(0.0, 2.0, 101):
                p = PlanePoint(x=float(x), y=float(y))
                u = field.eval_u(p)
                violation = max(violation, field.lower_bound(p) - u, u - field.upper_bound(p))
                mirrored = (
                    PlanePoint(x=float(y), y=float(x)),
                    PlanePoint(x=2.0 - float(x), y=float(y)),
                    PlanePoint(x=float(x), y=2.0 - float(y)),
                )
                symmetry = max(symmetry, max(abs(field.eval_u(q) - u) for q in mirrored))

        interior = self._interior_samples(self.sample_count)
        harmonic = 0.0
        determinant = 0.0
        for p in interior:
            (h_xx, h_xy), (_, h_yy) = field.eval_hessian(p)
            gx, gy = field.eval_grad(p)
            harmonic = max(harmonic, abs(gx * gx * h_xx + 2.0 * gx * gy * h_xy + gy * gy * h_yy))
            result = field.solve_folded(fold(p))
            if abs(result.theta_star - Geometry.QUARTER_PI) > 0.05:
                q = result.r_star ** SeriesConstants.NOME_POWER
                theta2 = SeriesCalculator.eval_theta2(2.0 * result.theta_star, q, policy=self.series_policy)
                expected = -(math.pi ** 2 / 16.0) * result.r_star ** 4 / theta2 ** 2
                determinant = max(determinant, abs((h_xx * h_yy - h_xy * h_xy) - expected) / abs(expected))

        hessian_fd = 0.0
        h = Tol.HESSIAN_FD_STEP
        for p in interior[:20]:
            analytic = field.eval_hessian(p)
            def u(dx: float, dy: float, p: PlanePoint = p) -> float:
                return field.eval_u(PlanePoint(x=p.x + dx, y=p.y + dy))

            u0 = u(0.0, 0.0)
            fd_xx = (u(h, 0.0) - 2.0 * u0 + u(-h, 0.0)) / (h * h)
            fd_yy = (u(0.0, h) - 2.0 * u0 + u(0.0, -h)) / (h * h)
            fd_xy = (u(h, h) - u(h, -h) - u(-h, h) + u(-h, -h)) / (4.0 * h * h)
            scale = max(1.0, max(abs(v) for row in analytic for v in row))
            hessian_fd = max(
                hessian_fd,
                abs(fd_xx - analytic[0][0]) / scale,
                abs(fd_xy - analytic[0][1]) / scale,
                abs(fd_yy - analytic[1][1]) / scale,
            )

        median_jump = 0.0
        delta = 1e-10
        for t in np.linspace(0.05, 0.95, 100):
            on = field.eval_grad(PlanePoint(x=1.0, y=float(t)))
            for side_x in (1.0 - delta, 1.0 + delta):
                near = field.eval_grad(PlanePoint(x=side_x, y=float(t)))
                median_jump = max(median_jump, math.hypot(near[0] - on[0], near[1] - on[1]))

        # away from the squeeze limit the jump across x = 1 is about 2 delta / (1 - t)
        crossing_ratio = 0.0
        crossings = nested = 0
        for delta in Tol.MEDIAN_OFFSETS:
            for t in np.linspace(0.05, 0.95, 19):
                left = PlanePoint(x=1.0 - delta, y=float(t))
                right = PlanePoint(x=1.0 + delta, y=float(t))
                crossings += 1
                nested += not field.solve_folded(fold(left)).closed_form
                (lx, ly), (rx, ry) = field.eval_grad(left), field.eval_grad(right)
                jump = math.hypot(lx - rx, ly - ry)
                crossing_ratio = max(crossing_ratio, jump * (1.0 - t) / (2.0 * delta))

        envelope = 0.0
        for s in np.linspace(0.2, 1.2, 11):
            g = field.diagonal_value(float(s)).g
            for t in (1e-3, 1e-4, 1e-5):
                for sign in (1.0, -1.0):
                    offset = sign * t
                    p = PlanePoint(x=(s + offset) / Geometry.SQRT2, y=(s - offset) / Geometry.SQRT2)
                    gx, gy = field.eval_grad(p)
                    jump = math.hypot(gx - g / Geometry.SQRT2, gy - g / Geometry.SQRT2)
                    envelope = max(envelope, jump / t ** (1.0 / 3.0))

        samples = np.linspace(0.0, Geometry.SQRT2, 1001)
        values = [field.diagonal_value(float(s)) for s in samples]
        u_diag = np.array([v.u for v in values])
        g_diag = np.array([v.g for v in values])
        convexity = float(np.min(u_diag[2:] - 2.0 * u_diag[1:-1] + u_diag[:-2]))
        g_increase = float(np.min(np.diff(g_diag)))

        s_mid = Geometry.SQRT2 / 2.0
        transverse = [field.diagonal_transverse_second_derivative(s_mid, t) for t in (1e-2, 1e-3, 1e-4)]
        decreasing = transverse[0] > transverse[1] > transverse[2]
        mirrored_gap = abs(
            field.diagonal_transverse_second_derivative(s_mid, 1e-3)
            - field.diagonal_transverse_second_derivative(s_mid, -1e-3)
        ) / abs(transverse[1])
        consistency = self._transverse_consistency(s_mid, 0.2)

        return [
            _upper_check("u = 0 on the boundary", boundary_value, Tol.BOUNDARY_VALUE, f"{len(boundary)} points"),
            CheckResult(name="u = 1 at the center", passed=center == 1.0, measured=center, tolerance=0.0),
            _upper_check("bounds squeeze on a 101 x 101 grid", violation, Tol.BOUNDS_SLACK),
            _upper_check("eight-fold symmetry", symmetry, Tol.SWAP_SYMMETRY),
            _upper_check("∞-harmonic residual < 1e-9", harmonic, Tol.INFINITY_HARMONIC, f"{len(interior)} points"),
            _upper_check("Hessian determinant identity", determinant, Tol.DETERMINANT),
            _upper_check("Hessian matches finite differences", hessian_fd, Tol.HESSIAN_FD),
            _upper_check("gradient continuous at the median squeeze limit", median_jump, Tol.MEDIAN_JUMP),
            _upper_check("gradient jump across medians within 4 delta / (1 - t)", crossing_ratio,
                         Tol.MEDIAN_CROSSING, f"{nested} of {crossings} crossings solved by the nested minimax"),
            _lower_check("median crossings use the nested minimax", nested, crossings - 1),
            _upper_check("gradient jump across the diagonal within 5 t^(1/3)", envelope, Tol.DIAGONAL_ENVELOPE),
            _lower_check("diagonal values are convex", convexity, 0.0),
            _lower_check("g is strictly increasing", g_increase, 0.0),
            CheckResult(
                name="transverse c'' strictly decreasing toward the diagonal",
                passed=bool(decreasing), measured=transverse[2],
                detail=f"offsets 1e-2, 1e-3, 1e-4: {transverse}",
            ),
            _lower_check("transverse c'' growth between offsets 1e-2 and 1e-4",
                         transverse[2] / transverse[0], Tol.TRANSVERSE_RATIO),
            _upper_check("transverse c'' below -50 at offset 1e-4", transverse[2], Tol.TRANSVERSE_CEILING),
            _upper_check("transverse c'' even in the offset", mirrored_gap, Tol.TRANSVERSE_CONSISTENCY),
            _upper_check("transverse c'' equals 1perp Hu 1perp", consistency, Tol.TRANSVERSE_CONSISTENCY),
        ]

    def _transverse_consistency(self, s: float, offset: float) -> float:
        field = self.field
        c2 = field.diagonal_transverse_second_derivative(s, offset)
        point = PlanePoint(x=(s + offset) / Geometry.SQRT2, y=(s - offset) / Geometry.SQRT2)
        (h_xx, h_xy), (_, h_yy) = field.eval_hessian(point)
        e1, e2 = _PERP
        quadratic = e1 * e1 * h_xx + 2.0 * e1 * e2 * h_xy + e2 * e2 * h_yy
        return abs(c2 - quadratic) / max(abs(quadratic), 1.0)

    # ==================== Analysis ====================

    def analysis_checks(self) -> List[CheckResult]:
        analysis = self.analysis
        report = analysis.ground_state_disproof()

        slope_gap = 0.0
        step = 1e-5
        for r in (0.3, 0.5, 0.8, 0.95):
            fd = (analysis.defect(r + step) - analysis.defect(r - step)) / (2.0 * step)
            slope_gap = max(slope_gap, abs(fd - analysis.defect_slope(r)))

        anchor = analysis.aronsson_approximation(PlanePoint(x=1.0, y=1.0))

        approximation_gap = 0.0
        compared = 0
        for x, y in halton_points(200, (0.001, 0.001), (0.02, 0.02)):
            if compared == 100:
                break
            p = PlanePoint(x=float(x), y=float(y))
            if abs(p.x - p.y) < 1e-12:
                continue
            result = self.solver.solve_minimax(p)
            if result.r_star > Tol.SMALL_GRADIENT:
                continue
            compared += 1
            approximation_gap = max(approximation_gap, abs(result.u - analysis.aronsson_approximation(p)))

        integral_gap = 0.0
        for r in np.linspace(0.05, 0.95, 20):
            for theta in np.linspace(0.0, Geometry.HALF_PI, 20):
                p = PolarPoint(r=float(r), theta=float(theta))
                integral_gap = max(
                    integral_gap,
                    abs(analysis.theta_integral_u(p) - SeriesCalculator.eval_U(p, self.series_policy)),
                )

        heat_gap = 0.0
        step = Tol.HEAT_FD_STEP
        for t in (0.2, 0.5, 1.0):
            for theta in (0.3, 0.8, 1.2):
                v_t = _extrapolated(
                    lambda s: (analysis.caloric_value(t + s, theta) - analysis.caloric_value(t - s, theta)) / (2.0 * s),
                    step,
                )
                v_tt = _extrapolated(
                    lambda s: (
                        analysis.caloric_value(t, theta + s) - 2.0 * analysis.caloric_value(t, theta)
                        + analysis.caloric_value(t, theta - s)
                    ) / (s * s),
                    step,
                )
                heat_gap = max(heat_gap, abs(v_t - v_tt))

        return [
            _lower_check("d_max > 0", report.d_max, 0.0, f"r_max={report.r_max!r}"),
            _lower_check("d_max > 5e-3", report.d_max, Tol.DISPROOF_MIN_GAP),
            _lower_check("1 - |grad u|/u > 0 at the witness", report.lambda_defect, 0.0, f"s0={report.s0!r}"),
            _upper_check("d(0.9) < 0", analysis.defect(0.9), 0.0),
            _lower_check("d(0.99) > 0", analysis.defect(0.99), 0.0),
            _upper_check("d(0) = d(1) = 0", max(abs(analysis.defect(0.0)), abs(analysis.defect(1.0))), 1e-15),
            _upper_check("d' matches finite differences", slope_gap, Tol.SLOPE_FD),
            _upper_check("d'(1-) = -1", abs(report.edge_slope + 1.0), Tol.EDGE_SLOPE),
            _upper_check("first approximation at (1, 1) = 0.99800",
                         abs(anchor - 0.998), Tol.CORNER_ESTIMATE),
            _upper_check("first approximation where |grad u| <= 0.3",
                         approximation_gap, Tol.FIRST_APPROXIMATION, f"{compared} points"),
            _lower_check("first approximation compared at 50 or more points", compared, 49),
            _upper_check("theta2 integral equals U", integral_gap, Tol.THETA_INTEGRAL),
            _upper_check("U(exp(-t), theta) solves the heat equation", heat_gap, Tol.HEAT_RESIDUAL,
                         f"central differences at steps {step!r} and {step / 2!r}, extrapolated"),
        ]
