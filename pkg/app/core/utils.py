# app/core/utils.py

"""
Common utility functions used across the toolkit.
Provides float formatting, quasi-random sampling and the squeeze bounds of the potential.
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy.stats import qmc


# ==================== Formatting Utilities ====================

def format_float(value: Optional[float]) -> str:
    """
    Format a float for export.

    Uses the shortest representation that round-trips, so identical values
    always print identically.

    Args:
        value: Value to format, or None for an empty cell

    Returns:
        str: Formatted value
    """
    if value is None:
        return ""
    return repr(float(value))


def clamp(value: float, low: float, high: float) -> float:
    """
    Clamp a value into [low, high].

    Args:
        value: Value to clamp
        low: Lower end
        high: Upper end

    Returns:
        float: Clamped value
    """
    return max(low, min(high, value))


# ==================== Sampling Utilities ====================

def halton_points(
    count: int,
    low: Tuple[float, float] = (0.0, 0.0),
    high: Tuple[float, float] = (1.0, 1.0),
    skip: int = 1
) -> np.ndarray:
    """
    Deterministic two-dimensional quasi-random points in a box.

    The unscrambled Halton sequence is reproducible across runs; the first
    point (the lower corner) is skipped by default.

    Args:
        count: Number of points
        low: Lower box corner
        high: Upper box corner
        skip: Leading sequence points to discard

    Returns:
        np.ndarray: Array of shape (count, 2)
    """
    sampler = qmc.Halton(d=2, scramble=False)
    unit = sampler.random(count + skip)[skip:]
    return qmc.scale(unit, low, high)


# ==================== Geometry Utilities ====================

def squeeze_bounds(x: float, y: float) -> Tuple[float, float]:
    """
    Lower and upper bounds of the potential at a point of [0, 2]^2.

    The lower bound is the cone 1 - |(x, y) - (1, 1)|, the upper bound the
    distance to the outer boundary.

    Args:
        x: Abscissa
        y: Ordinate

    Returns:
        Tuple of (lower, upper)
    """
    lower = 1.0 - math.hypot(1.0 - x, 1.0 - y)
    upper = min(x, y, 2.0 - x, 2.0 - y)
    return lower, upper
