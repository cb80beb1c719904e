"""Safeguarded Newton iteration on a sign-changing bracket."""

import math
from typing import Callable, NamedTuple, Optional, Tuple

from app.core.exceptions import BracketError, ConvergenceError
from app.core.logging_config import solver_logger


class RootResult(NamedTuple):
    """Root of a one-dimensional solve.

    Attributes:
        root: Abscissa of the root
        iterations: Function evaluations inside the loop
        residual: |f| at the last evaluated iterate
    """
    root: float
    iterations: int
    residual: float


def safeguarded_newton(
    func: Callable[[float], Tuple[float, float]],
    lo: float,
    hi: float,
    *,
    tol: float,
    max_iter: int,
    bracket_shrink: float,
    guess: Optional[float] = None,
    f_lo: Optional[float] = None,
    f_hi: Optional[float] = None,
    name: str = "root"
) -> RootResult:
    """
    Find the root of ``func`` on [lo, hi] by Newton steps kept inside a bracket.

    ``func(x)`` returns ``(f, df)``. A Newton step is rejected in favour of
    bisection when df is not finite, when the step leaves the bracket, or when
    it fails to halve the previous step. The bracket is updated from the sign
    of every new value, so it always contains the root.

    Args:
        func: Function returning value and derivative
        lo: Left end of the bracket
        hi: Right end of the bracket
        tol: Stop once |f| <= tol
        max_iter: Iteration cap
        bracket_shrink: Stop once the bracket is narrower than this, returning its midpoint
            when |f| is within tol or explained by the slope across the bracket
        guess: Starting point; the midpoint when absent or outside the bracket
        f_lo: Known value at lo, saving an evaluation
        f_hi: Known value at hi, saving an evaluation
        name: Label used in errors and logs

    Returns:
        RootResult

    Raises:
        BracketError: If f(lo) and f(hi) have the same strict sign
        ConvergenceError: If max_iter is exhausted, or the bracket collapses on a
            residual the slope cannot explain
    """
    if f_lo is None:
        f_lo = func(lo)[0]
    if f_hi is None:
        f_hi = func(hi)[0]
    if f_lo == 0.0:
        return RootResult(lo, 0, 0.0)
    if f_hi == 0.0:
        return RootResult(hi, 0, 0.0)
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(name, lo, hi, f_lo, f_hi)

    # x_neg carries f < 0, x_pos carries f > 0
    x_neg, x_pos = (lo, hi) if f_lo < 0.0 else (hi, lo)

    if guess is not None and min(lo, hi) < guess < max(lo, hi):
        x = guess
    else:
        x = 0.5 * (lo + hi)
    dx_old = abs(hi - lo)
    dx = dx_old
    f, df = func(x)

    for iteration in range(1, max_iter + 1):
        if abs(f) <= tol:
            solver_logger.debug(f"{name}: converged in {iteration} iterations, |f|={abs(f)!r}")
            return RootResult(x, iteration, abs(f))
        if f < 0.0:
            x_neg = x
        else:
            x_pos = x
        width = abs(x_pos - x_neg)
        if width <= bracket_shrink:
            # a residual larger than the slope across the bracket is not a root
            if abs(f) > tol and not abs(f) <= 2.0 * abs(df) * width:
                raise ConvergenceError(name, iteration, abs(f))
            return RootResult(0.5 * (x_neg + x_pos), iteration, abs(f))

        newton_ok = (
            math.isfinite(df)
            and df != 0.0
            and ((x - x_pos) * df - f) * ((x - x_neg) * df - f) < 0.0
            and abs(2.0 * f) <= abs(dx_old * df)
        )
        dx_old = dx
        if newton_ok:
            dx = f / df
            previous = x
            x = x - dx
            if x == previous:
                return RootResult(x, iteration, abs(f))
        else:
            dx = 0.5 * (x_pos - x_neg)
            x = x_neg + dx
            if x == x_neg or x == x_pos:
                return RootResult(x, iteration, abs(f))
        f, df = func(x)

    raise ConvergenceError(name, max_iter, abs(f))
