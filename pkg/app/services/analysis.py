"""Derived results of the explicit potential.

Covers the one-term approximation, the theta2 integral representation
of U, the heat-equation reading of U and the diagonal gap

    d(r) = U(r, pi/4) - r = u - |grad u|   at the diagonal point W_r(r, pi/4) 1,

whose positive maximum shows that u is not an infinity ground state.
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from app.core.config import Settings, settings
from app.core.constants import DisproofDefaults, Geometry, SeriesConstants, SeriesForm
from app.core.exceptions import DisproofError, DomainError, QuadratureError
from app.core.logging_config import analysis_logger
from app.schemas.analysis_dto import DisproofReport
from app.schemas.minimax_dto import PlanePoint
from app.schemas.polar_dto import PolarPoint, SeriesPolicy
from app.services.first_approximation import FirstApproximation
from app.services.series_core import SeriesCalculator


class AnalysisService:
    """Derived quantities computed from the series core.

    Attributes:
        series_policy: Truncation policy
        quadrature_abs_tol: Absolute tolerance of the theta2 integral
        quadrature_limit: Subinterval cap of the adaptive quadrature
    """

    def __init__(self, series_policy: Optional[SeriesPolicy] = None, cfg: Settings = settings):
        self.series_policy = series_policy or SeriesPolicy.from_settings(cfg)
        self.quadrature_abs_tol = cfg.QUADRATURE_ABS_TOL
        self.quadrature_limit = cfg.QUADRATURE_LIMIT

    # ==================== First approximation ====================

    @staticmethod
    def _require_unit_square(point: PlanePoint) -> None:
        if point.x > Geometry.CENTER or point.y > Geometry.CENTER:
            raise DomainError("(x, y)", (point.x, point.y), "[0, 1] x [0, 1]")

    def aronsson_approximation(self, point: PlanePoint) -> float:
        """
        One-term approximation (3c/8)((x + y)^(4/3) - |y - x|^(4/3)).

        Args:
            point: Point of [0, 1]^2

        Returns:
            Approximate potential; 0.99800... at (1, 1)
        """
        self._require_unit_square(point)
        return FirstApproximation.value(point.x, point.y)

    def aronsson_gradient(self, point: PlanePoint) -> Tuple[float, float]:
        """Gradient of the one-term approximation."""
        self._require_unit_square(point)
        return FirstApproximation.gradient(point.x, point.y)

    # ==================== Integral representation ====================

    def theta_integral_u(self, p: PolarPoint) -> float:
        """
        U(r, theta) as (4/pi) times the integral of theta2(2 psi, r^16) over [0, theta].

        Args:
            p: Point with r < 1

        Returns:
            Integral value

        Raises:
            DomainError: If r = 1
            QuadratureError: If QUADPACK reports a failure
        """
        if p.r >= 1.0:
            raise DomainError("r", p.r, "[0, 1)")
        if p.theta == 0.0:
            return 0.0
        q = p.r ** SeriesConstants.NOME_POWER
        policy = self.series_policy

        def integrand(psi: float) -> float:
            return SeriesConstants.THETA_PREFACTOR * SeriesCalculator.eval_theta2(2.0 * psi, q, policy=policy)

        result = quad(
            integrand, 0.0, p.theta,
            epsabs=self.quadrature_abs_tol,
            epsrel=0.0,
            limit=self.quadrature_limit,
            full_output=1,
        )
        if len(result) > 3:
            raise QuadratureError(p.r, p.theta, str(result[3]))
        return float(result[0])

    def caloric_value(self, t: float, theta: float) -> float:
        """
        Heat-equation solution v(t, theta) = U(exp(-t), theta).

        v_t = v_thetatheta on [0, pi/2] with v(0, .) = 1 and zero end values.
        """
        if t < 0.0:
            raise DomainError("t", t, "[0, inf)")
        return SeriesCalculator.eval_U(PolarPoint.at(math.exp(-t), theta), self.series_policy)

    # ==================== Diagonal gap ====================

    def defect(self, r: float) -> float:
        """d(r) = U(r, pi/4) - r."""
        return SeriesCalculator.eval_U(PolarPoint.at(r, Geometry.QUARTER_PI), self.series_policy) - r

    def defect_slope(self, r: float, form: Optional[SeriesForm] = None) -> float:
        """d'(r) = U_r(r, pi/4) - 1, tending to -1 as r -> 1."""
        return SeriesCalculator.eval_Ur_diagonal(r, self.series_policy, form) - 1.0

    @staticmethod
    def disproof_grid(n_samples: int) -> np.ndarray:
        """Uniform radii merged with the geometric radii 1 - 2^-k."""
        levels = DisproofDefaults.GEOMETRIC_LEVELS
        uniform = np.linspace(0.0, 1.0, n_samples - levels)
        geometric = 1.0 - 2.0 ** -np.arange(1, levels + 1, dtype=float)
        return np.unique(np.concatenate([uniform, geometric]))

    def ground_state_disproof(self, n_samples: int = DisproofDefaults.DEFAULT_SAMPLES) -> DisproofReport:
        """
        Locate the positive maximum of d(r) and its diagonal witness.

        Args:
            n_samples: Number of sampled radii, at least 100

        Returns:
            DisproofReport

        Raises:
            DomainError: If n_samples is below 100
            DisproofError: If d never becomes positive
        """
        if n_samples < DisproofDefaults.MIN_SAMPLES:
            raise DomainError("n_samples", n_samples, f">= {DisproofDefaults.MIN_SAMPLES}")

        r_grid = self.disproof_grid(n_samples)
        d_values = np.array([self.defect(float(r)) for r in r_grid])
        i = int(np.argmax(d_values))
        if d_values[i] <= 0.0 or i == 0 or i == r_grid.size - 1:
            raise DisproofError(float(d_values[i]), float(r_grid[i]))

        bracket = (float(r_grid[i - 1]), float(r_grid[i]), float(r_grid[i + 1]))
        search = minimize_scalar(
            lambda r: -self.defect(r),
            bracket=bracket,
            method="golden",
            tol=DisproofDefaults.GOLDEN_TOL,
        )
        r_max = float(search.x)
        d_max = self.defect(r_max)
        if d_max < d_values[i]:
            r_max, d_max = bracket[1], float(d_values[i])
        if d_max <= 0.0:
            raise DisproofError(d_max, r_max)

        r_cross = None
        for j in range(i - 1, -1, -1):
            if d_values[j] < 0.0 < d_values[j + 1]:
                r_cross = float(brentq(
                    self.defect, float(r_grid[j]), float(r_grid[j + 1]),
                    xtol=DisproofDefaults.CROSSING_XTOL,
                ))
                break

        witness = SeriesCalculator.partials(r_max, Geometry.QUARTER_PI, self.series_policy)
        u_witness = witness.U
        report = DisproofReport(
            r_grid=r_grid.tolist(),
            d_values=d_values.tolist(),
            r_max=r_max,
            d_max=d_max,
            r_cross=r_cross,
            s0=witness.W_r,
            u_witness=u_witness,
            grad_witness=r_max,
            lambda_defect=1.0 - r_max / u_witness,
            edge_slope=self.defect_slope(DisproofDefaults.EDGE_RADIUS, SeriesForm.PRODUCT),
        )
        analysis_logger.info(
            f"Diagonal gap: d_max={d_max!r} at r={r_max!r}, sign change at r={r_cross!r}"
        )
        return report
