"""Series evaluation for the hodograph potential.

Evaluates

    W(r, theta) = (8/pi) sum_n r^(m_n^2) sin(m_n theta) / ((m_n^2 - 1) m_n),   m_n = 4n - 2,

its partial derivatives, U = r W_r - W, U_theta and the Jacobi theta2
function in series and product form on the closed quadrant 0 <= r <= 1,
0 <= theta <= pi/2.

Every sum stops at the first term whose absolute bound is below the policy
tolerance; reaching the term cap first raises TruncationError. From the
boundary snap radius on, the closed forms on r = 1 replace the sums.
"""

import math
from functools import lru_cache
from typing import Callable, List, Optional, Sequence

import mpmath
import numpy as np

from app.core.constants import Geometry, SeriesConstants, SeriesForm
from app.core.exceptions import CornerSingularityError, DomainError, TruncationError
from app.core.logging_config import series_logger
from app.schemas.polar_dto import PolarPoint, SeriesPolicy, SeriesTerm, WPartials

_PREFACTOR = SeriesConstants.PREFACTOR
_LOG_PREFACTOR = math.log(_PREFACTOR)
_DEFAULT_POLICY = SeriesPolicy()


@lru_cache(maxsize=128)
def _modes(count: int) -> np.ndarray:
    """Frequencies m_1, ..., m_count."""
    modes = (
        SeriesConstants.MODE_STEP * np.arange(1, count + 1, dtype=float)
        - SeriesConstants.MODE_OFFSET
    )
    modes.flags.writeable = False
    return modes


# Log of the coefficient magnitude of each series, as a function of m
def _log_w_coefficient(m: float) -> float:
    return -math.log((m * m - 1.0) * m)


def _log_u_coefficient(m: float) -> float:
    return -math.log(m)


def _log_unit_coefficient(m: float) -> float:
    return 0.0


def _log_linear_coefficient(m: float) -> float:
    return math.log(m)


def _term_count(
    r: float,
    policy: SeriesPolicy,
    series: str,
    log_coefficient: Callable[[float], float],
    shift: int = 0
) -> int:
    """Smallest n with (8/pi)|c(m_n)| r^(m_n^2 - shift) < abs_tol.

    Terms 1..n are summed; every omitted term is smaller still, since the
    quadratic exponent dominates the coefficient growth past the estimate.
    """
    if r <= 0.0:
        return 1
    log_r = math.log(r)
    log_tol = math.log(policy.abs_tol)

    def log_bound(n: int) -> float:
        m = SeriesConstants.MODE_STEP * n - SeriesConstants.MODE_OFFSET
        return _LOG_PREFACTOR + log_coefficient(m) + (m * m - shift) * log_r

    budget = _LOG_PREFACTOR - log_tol
    m_estimate = math.sqrt(budget / -log_r + shift)
    m_estimate = math.sqrt(
        max(budget + log_coefficient(max(m_estimate, 2.0)), 0.0) / -log_r + shift
    )
    n = max(1, math.ceil((m_estimate + SeriesConstants.MODE_OFFSET) / SeriesConstants.MODE_STEP))
    if n > policy.max_terms:
        raise TruncationError(series, r, policy.max_terms)

    while n > 1 and log_bound(n - 1) < log_tol:
        n -= 1
    while log_bound(n) >= log_tol:
        n += 1
        if n > policy.max_terms:
            raise TruncationError(series, r, policy.max_terms)
    return n


def _is_corner(theta: float, policy: SeriesPolicy) -> bool:
    width = policy.corner_width
    return theta <= width or theta >= Geometry.HALF_PI - width


def _closed_form_partials(r: float, theta: float, policy: SeriesPolicy) -> WPartials:
    if _is_corner(theta, policy):
        raise CornerSingularityError("W_r", r, theta)
    c, s = math.cos(theta), math.sin(theta)
    return WPartials(
        r=r, theta=theta,
        W=c + s - 1.0,
        W_r=c + s,
        W_theta=c - s,
        W_rr=0.0,
        W_rtheta=c - s,
        W_thetatheta=-(c + s),
        U=1.0,
        U_r=0.0,
        U_theta=0.0,
        terms=0,
        closed_form=True,
    )


_ZERO_PARTIALS = dict(
    W=0.0, W_r=0.0, W_theta=0.0, W_rr=0.0, W_rtheta=0.0, W_thetatheta=0.0,
    U=0.0, U_r=0.0, U_theta=0.0, terms=0,
)


class SeriesCalculator:
    """Evaluation service for the m_n-indexed series.

    All methods are static and pure: results depend only on the arguments,
    so concurrent calls need no coordination.
    """

    @staticmethod
    def terms(count: int) -> List[SeriesTerm]:
        """The first ``count`` series indices."""
        return [SeriesTerm.of(n) for n in range(1, count + 1)]

    # ==================== W and its derivatives ====================

    @staticmethod
    def eval_W(p: PolarPoint, policy: Optional[SeriesPolicy] = None) -> float:
        """Evaluate W(r, theta).

        Args:
            p: Point of the closed quadrant
            policy: Truncation policy

        Returns:
            W in [0, sqrt(2) - 1]

        Raises:
            TruncationError: If max_terms is reached before the tail bound is met
        """
        policy = policy or _DEFAULT_POLICY
        if p.r >= policy.boundary_snap:
            return math.cos(p.theta) + math.sin(p.theta) - 1.0
        if p.r == 0.0:
            return 0.0
        count = _term_count(p.r, policy, "W", _log_w_coefficient)
        m = _modes(count)
        m2 = m * m
        terms = np.exp(m2 * math.log(p.r)) * np.sin(m * p.theta) / ((m2 - 1.0) * m)
        return _PREFACTOR * math.fsum(terms)

    @staticmethod
    def eval_W_partials(p: PolarPoint, policy: Optional[SeriesPolicy] = None) -> WPartials:
        """Evaluate W and all its companions from one term set.

        Args:
            p: Point of the closed quadrant
            policy: Truncation policy

        Returns:
            WPartials record

        Raises:
            CornerSingularityError: At (1, 0) and (1, pi/2), where W_r jumps
            TruncationError: If max_terms is reached before the tail bound is met
        """
        return SeriesCalculator.partials(p.r, p.theta, policy or _DEFAULT_POLICY)

    @staticmethod
    def partials(r: float, theta: float, policy: SeriesPolicy) -> WPartials:
        """Partial-derivative record at already validated (r, theta).

        The termwise coefficients follow from differentiating r^(m^2) sin(m theta):
        W_r carries m/(m^2-1), W_rr carries m, W_rtheta carries m^2/(m^2-1).
        """
        if r >= policy.boundary_snap:
            return _closed_form_partials(r, theta, policy)
        if r == 0.0:
            return WPartials(r=r, theta=theta, **_ZERO_PARTIALS)

        count = _term_count(r, policy, "W partials", _log_linear_coefficient, shift=2)
        m = _modes(count)
        m2 = m * m
        log_r = math.log(r)
        power = np.exp(m2 * log_r)
        power_1 = np.exp((m2 - 1.0) * log_r)
        power_2 = np.exp((m2 - 2.0) * log_r)
        sin_m = np.sin(m * theta)
        cos_m = np.cos(m * theta)
        denom = m2 - 1.0
        fsum = math.fsum

        return WPartials(
            r=r, theta=theta,
            W=_PREFACTOR * fsum(power * sin_m / (denom * m)),
            W_r=_PREFACTOR * fsum(power_1 * m * sin_m / denom),
            W_theta=_PREFACTOR * fsum(power * cos_m / denom),
            W_rr=_PREFACTOR * fsum(power_2 * m * sin_m),
            W_rtheta=_PREFACTOR * fsum(power_1 * m2 * cos_m / denom),
            W_thetatheta=-_PREFACTOR * fsum(power * m * sin_m / denom),
            U=_PREFACTOR * fsum(power * sin_m / m),
            U_r=_PREFACTOR * fsum(power_1 * m * sin_m),
            U_theta=_PREFACTOR * fsum(power * cos_m),
            terms=count,
        )

    @staticmethod
    def eval_W_grid(
        r_values: Sequence[float],
        theta_values: Sequence[float],
        policy: Optional[SeriesPolicy] = None
    ) -> np.ndarray:
        """W on a tensor grid, shape (len(theta_values), len(r_values)).

        Summation runs as one matrix product, so this is meant for dense
        sampling rather than for the last digits of a single value.
        """
        policy = policy or _DEFAULT_POLICY
        r = np.asarray(r_values, dtype=float)
        theta = np.asarray(theta_values, dtype=float)
        if r.size and (r.min() < 0.0 or r.max() > 1.0):
            raise DomainError("r", (float(r.min()), float(r.max())), "[0, 1]")
        if theta.size and (theta.min() < 0.0 or theta.max() > Geometry.HALF_PI):
            raise DomainError("theta", (float(theta.min()), float(theta.max())), "[0, pi/2]")

        grid = np.zeros((theta.size, r.size))
        snapped = r >= policy.boundary_snap
        inside = (r > 0.0) & ~snapped
        if inside.any():
            count = _term_count(float(r[inside].max()), policy, "W grid", _log_w_coefficient)
            m = _modes(count)
            m2 = m * m
            radial = np.exp(np.outer(np.log(r[inside]), m2)) / ((m2 - 1.0) * m)
            angular = np.sin(np.outer(theta, m))
            grid[:, inside] = _PREFACTOR * (angular @ radial.T)
        if snapped.any():
            grid[:, snapped] = (np.cos(theta) + np.sin(theta) - 1.0)[:, None]
        return grid

    # ==================== U = r W_r - W ====================

    @staticmethod
    def eval_U(p: PolarPoint, policy: Optional[SeriesPolicy] = None) -> float:
        """Evaluate U(r, theta) = (8/pi) sum r^(m^2) sin(m theta)/m.

        Under r = exp(-t) this is the heat-equation solution on [0, pi/2]
        with unit initial data and zero end values.
        """
        policy = policy or _DEFAULT_POLICY
        if p.r >= policy.boundary_snap:
            return 0.0 if p.theta in (0.0, Geometry.HALF_PI) else 1.0
        if p.r == 0.0:
            return 0.0
        count = _term_count(p.r, policy, "U", _log_u_coefficient)
        m = _modes(count)
        terms = np.exp(m * m * math.log(p.r)) * np.sin(m * p.theta) / m
        return _PREFACTOR * math.fsum(terms)

    @staticmethod
    def eval_U_theta(p: PolarPoint, policy: Optional[SeriesPolicy] = None) -> float:
        """Evaluate U_theta(r, theta) = (8/pi) sum r^(m^2) cos(m theta).

        Positive for theta < pi/4, negative for theta > pi/4, zero on pi/4.

        Raises:
            CornerSingularityError: On r = 1 at theta = 0 or pi/2, where the sum diverges
        """
        policy = policy or _DEFAULT_POLICY
        if p.r >= policy.boundary_snap:
            if _is_corner(p.theta, policy):
                raise CornerSingularityError("U_theta", p.r, p.theta)
            return 0.0
        if p.r == 0.0:
            return 0.0
        count = _term_count(p.r, policy, "U_theta", _log_unit_coefficient)
        m = _modes(count)
        terms = np.exp(m * m * math.log(p.r)) * np.cos(m * p.theta)
        return _PREFACTOR * math.fsum(terms)

    @staticmethod
    def eval_Ur_diagonal(
        r: float,
        policy: Optional[SeriesPolicy] = None,
        form: Optional[SeriesForm] = None
    ) -> float:
        """Evaluate U_r(r, pi/4) = r W_rr(r, pi/4).

        Series: (8/pi)(2r^3 - 6r^35 + 10r^99 - ...).
        Product: (16/pi) r^3 prod_k (1 - r^(32k))^3, which reaches the limit 0
        at r -> 1 without cancellation.
        It follows from r U_r = -d/dtheta U_theta with U_theta = (4/pi) theta2(2 theta, r^16).

        Args:
            r: Radius in [0, 1)
            policy: Truncation policy
            form: Representation; product above the crossover nome by default

        Returns:
            U_r on the diagonal
        """
        policy = policy or _DEFAULT_POLICY
        if not 0.0 <= r < 1.0:
            raise DomainError("r", r, "[0, 1)")
        if r == 0.0 or r >= policy.boundary_snap:
            return 0.0
        if form is None:
            form = (
                SeriesForm.PRODUCT
                if r ** SeriesConstants.NOME_POWER > policy.product_crossover
                else SeriesForm.SERIES
            )
        log_r = math.log(r)

        if SeriesForm(form) is SeriesForm.SERIES:
            count = _term_count(r, policy, "U_r diagonal", _log_linear_coefficient, shift=1)
            m = _modes(count)
            # sin(m_n pi/4) = (-1)^(n-1)
            signs = 1.0 - 2.0 * (np.arange(count) % 2)
            terms = signs * m * np.exp((m * m - 1.0) * log_r)
            return _PREFACTOR * math.fsum(terms)

        log_q = SeriesConstants.DIAGONAL_PRODUCT_POWER * log_r
        count = max(1, math.ceil(math.log(policy.abs_tol / 3.0) / log_q))
        if count > policy.max_terms:
            raise TruncationError("U_r diagonal product", r, policy.max_terms)
        k = np.arange(1, count + 1, dtype=float)
        log_product = 3.0 * math.fsum(np.log1p(-np.exp(k * log_q)))
        return 2.0 * _PREFACTOR * r ** 3 * math.exp(log_product)

    # ==================== Jacobi theta2 ====================

    @staticmethod
    def eval_theta2(
        z: float,
        q: float,
        form: Optional[SeriesForm] = None,
        policy: Optional[SeriesPolicy] = None
    ) -> float:
        """Evaluate theta2(z, q) = 2 sum_k q^((k-1/2)^2) cos((2k-1) z).

        Product form: 2 q^(1/4) cos z prod_k (1 - q^(2k))(1 + 2 q^(2k) cos 2z + q^(4k)),
        accumulated as a sum of logarithms.

        Args:
            z: Argument in radians
            q: Nome in [0, 1)
            form: Representation; product above the crossover nome by default
            policy: Truncation policy

        Returns:
            theta2(z, q)
        """
        policy = policy or _DEFAULT_POLICY
        if not 0.0 <= q < 1.0:
            raise DomainError("q", q, "[0, 1)")
        if q == 0.0:
            return 0.0
        if form is None:
            form = SeriesForm.PRODUCT if q > policy.product_crossover else SeriesForm.SERIES
        log_q = math.log(q)

        if SeriesForm(form) is SeriesForm.SERIES:
            # first omitted term 2 q^((k-1/2)^2) below abs_tol
            half_index = math.sqrt(math.log(policy.abs_tol / 2.0) / log_q)
            count = max(1, math.ceil(half_index + 0.5))
            if count > policy.max_terms:
                raise TruncationError("theta2", q, policy.max_terms)
            k = np.arange(1, count + 1, dtype=float)
            terms = np.exp((k - 0.5) ** 2 * log_q) * np.cos((2.0 * k - 1.0) * z)
            return 2.0 * math.fsum(terms)

        # each factor differs from 1 by at most 4 q^(2k)
        count = max(1, math.ceil(math.log(policy.abs_tol / 4.0) / (2.0 * log_q)))
        if count > policy.max_terms:
            raise TruncationError("theta2 product", q, policy.max_terms)
        k = np.arange(1, count + 1, dtype=float)
        a = np.exp(2.0 * k * log_q)
        logs = np.log1p(-a) + np.log1p(a * (2.0 * math.cos(2.0 * z) + a))
        return 2.0 * math.exp(0.25 * log_q) * math.cos(z) * math.exp(math.fsum(logs))

    # ==================== Boundary values on r = 1 ====================

    @staticmethod
    def boundary_W(theta: float) -> float:
        """W(1, theta) as the odd pi-periodic extension of cos + sin - 1."""
        t = theta - math.pi * round(theta / math.pi)
        return math.copysign(math.cos(t) + abs(math.sin(t)) - 1.0, t)

    @staticmethod
    def boundary_W_theta(theta: float) -> float:
        """W_theta(1, theta) = |cos theta| - |sin theta|."""
        return abs(math.cos(theta)) - abs(math.sin(theta))

    @staticmethod
    def boundary_fourier_W(theta: float, n_terms: int = SeriesConstants.BOUNDARY_FOURIER_TERMS) -> float:
        """Partial Fourier sum (8/pi) sum sin(m theta)/((m^2 - 1) m) of W(1, theta)."""
        m = _modes(n_terms)
        return _PREFACTOR * math.fsum(np.sin(m * theta) / ((m * m - 1.0) * m))

    @staticmethod
    def boundary_fourier_W_theta(theta: float, n_terms: int = SeriesConstants.BOUNDARY_FOURIER_TERMS) -> float:
        """Partial Fourier sum (8/pi) sum cos(m theta)/(m^2 - 1) of W_theta(1, theta).

        Coefficients decay like 1/m^2 only, hence the long default sum.
        """
        m = _modes(n_terms)
        return _PREFACTOR * math.fsum(np.cos(m * theta) / (m * m - 1.0))

    # ==================== Extended precision ====================

    @staticmethod
    def eval_W_extended(
        p: PolarPoint,
        abs_tol: float = SeriesConstants.EXTENDED_ABS_TOL,
        dps: int = SeriesConstants.EXTENDED_DPS,
        max_terms: int = 1_000_000
    ) -> float:
        """W summed term by term in mpmath at ``dps`` digits.

        Used as a reference for the double-precision truncation rule.
        """
        with mpmath.workdps(dps):
            r = mpmath.mpf(p.r)
            theta = mpmath.mpf(p.theta)
            if r == 1:
                return float(mpmath.cos(theta) + mpmath.sin(theta) - 1)
            if r == 0:
                return 0.0
            prefactor = 8 / mpmath.pi
            total = []
            n = 1
            while True:
                term = SeriesTerm.of(n)
                magnitude = prefactor * r ** term.exponent / ((term.exponent - 1) * term.m)
                if magnitude < abs_tol:
                    break
                total.append(magnitude * mpmath.sin(term.m * theta))
                n += 1
                if n > max_terms:
                    raise TruncationError("W extended", p.r, max_terms)
            series_logger.debug(f"Extended W at r={p.r}: {n - 1} terms at {dps} digits")
            return float(mpmath.fsum(total))
