# app/core/exceptions.py

"""
Custom exception classes for the toolkit.
Every error carries a readable message and a details dict for reports.
"""

from typing import Any, Optional


# ==================== Base Exceptions ====================

class ApplicationError(Exception):
    """Base exception for all toolkit errors."""

    def __init__(self, message: str, details: Optional[dict] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


# ==================== Domain Exceptions ====================

class DomainError(ApplicationError):
    """Raised when an input lies outside the set an operation is defined on."""

    def __init__(self, quantity: str, value: Any, valid_range: str):
        message = f"{quantity}={value!r} lies outside {valid_range}"
        super().__init__(message, {"quantity": quantity, "value": value, "valid_range": valid_range})


# ==================== Series Exceptions ====================

class SeriesError(ApplicationError):
    """Base exception for series evaluation errors."""
    pass


class TruncationError(SeriesError):
    """Raised when the term cap is reached before the tail bound meets the tolerance."""

    def __init__(self, series: str, argument: float, max_terms: int):
        message = (
            f"{series} series at {argument!r} needs more than {max_terms} terms "
            f"to meet the truncation tolerance"
        )
        super().__init__(message, {"series": series, "argument": argument, "max_terms": max_terms})


class CornerSingularityError(SeriesError):
    """Raised when W_r or W_rr is requested at a jump corner (1, 0) or (1, pi/2)."""

    def __init__(self, quantity: str, r: float, theta: float):
        message = f"{quantity} is discontinuous at the corner (r={r!r}, theta={theta!r})"
        super().__init__(message, {"quantity": quantity, "r": r, "theta": theta})


# ==================== Solver Exceptions ====================

class SolverError(ApplicationError):
    """Base exception for one-dimensional solve failures."""
    pass


class BracketError(SolverError):
    """Raised when the end values of a bracket do not change sign."""

    def __init__(self, solve: str, lo: float, hi: float, f_lo: float, f_hi: float):
        message = (
            f"{solve}: no sign change on [{lo!r}, {hi!r}] "
            f"(f(lo)={f_lo!r}, f(hi)={f_hi!r})"
        )
        super().__init__(message, {"solve": solve, "lo": lo, "hi": hi, "f_lo": f_lo, "f_hi": f_hi})


class ConvergenceError(SolverError):
    """Raised when a solve exhausts its iteration cap."""

    def __init__(self, solve: str, iterations: int, residual: float):
        message = f"{solve}: no convergence after {iterations} iterations (residual {residual!r})"
        super().__init__(message, {"solve": solve, "iterations": iterations, "residual": residual})


# ==================== Field Exceptions ====================

class FieldError(ApplicationError):
    """Base exception for potential field evaluation errors."""
    pass


class UndefinedGradientError(FieldError):
    """Raised where the gradient of the potential does not exist."""

    def __init__(self, x: float, y: float, reason: str):
        message = f"gradient undefined at ({x!r}, {y!r}): {reason}"
        super().__init__(message, {"x": x, "y": y, "reason": reason})


class SingularHessianError(FieldError):
    """Raised when the point is too close to a diagonal for the Hessian to be conditioned."""

    def __init__(self, x: float, y: float, distance: float, guard: float):
        message = (
            f"Hessian refused at ({x!r}, {y!r}): distance {distance!r} to the diagonal "
            f"is below {guard!r}"
        )
        super().__init__(message, {"x": x, "y": y, "distance": distance, "guard": guard})


class HessianUndefinedError(FieldError):
    """Raised when the Hessian is requested on a median, the boundary or the center."""

    def __init__(self, x: float, y: float, region: str):
        message = f"Hessian not evaluated at ({x!r}, {y!r}) in region '{region}'"
        super().__init__(message, {"x": x, "y": y, "region": region})


# ==================== Analysis Exceptions ====================

class AnalysisError(ApplicationError):
    """Base exception for derived-result computations."""
    pass


class QuadratureError(AnalysisError):
    """Raised when adaptive quadrature reports failure."""

    def __init__(self, r: float, theta: float, reason: str):
        message = f"quadrature failed for (r={r!r}, theta={theta!r}): {reason}"
        super().__init__(message, {"r": r, "theta": theta, "reason": reason})


class DisproofError(AnalysisError):
    """Raised when the diagonal gap d(r) never becomes positive."""

    def __init__(self, d_max: float, r_max: float):
        message = f"maximal gap d={d_max!r} at r={r_max!r} is not positive"
        super().__init__(message, {"d_max": d_max, "r_max": r_max})


# ==================== Oracle Exceptions ====================

class OracleError(ApplicationError):
    """Base exception for the finite-difference oracle."""
    pass


class SweepConvergenceError(OracleError):
    """Raised when the sweep cap is reached before updates fall below tolerance."""

    def __init__(self, sweeps: int, last_update: float):
        message = f"discrete solve did not converge in {sweeps} sweeps (last update {last_update!r})"
        super().__init__(message, {"sweeps": sweeps, "last_update": last_update})


class MaximumPrincipleError(OracleError):
    """Raised when an iterate leaves [0, 1]."""

    def __init__(self, sweep: int, low: float, high: float):
        message = f"iterate {sweep} left [0, 1] (min {low!r}, max {high!r})"
        super().__init__(message, {"sweep": sweep, "min": low, "max": high})


# ==================== Configuration Exceptions ====================

class ConfigurationError(ApplicationError):
    """Raised when configuration is invalid."""

    def __init__(self, setting: str, reason: str):
        message = f"Configuration error for '{setting}': {reason}"
        super().__init__(message, {"setting": setting, "reason": reason})
