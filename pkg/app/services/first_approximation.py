"""Closed-form minimax for W cut after its first term.

With W replaced by (4/(3 pi)) r^4 sin(2 theta) the minimax is solved exactly
and gives a rotated Aronsson function. It is accurate where |grad u| is small
and seeds the outer angle solve everywhere.
"""

import math
from typing import Tuple

import numpy as np

from app.core.constants import FirstApproximationConstants

_C = FirstApproximationConstants.C


class FirstApproximation:
    """Value and gradient of the one-term approximation on [0, 1]^2."""

    @staticmethod
    def value(x: float, y: float) -> float:
        """(3c/8)((x + y)^(4/3) - |y - x|^(4/3)), c = (3 pi)^(1/3)/2."""
        return 0.375 * _C * ((x + y) ** (4.0 / 3.0) - abs(y - x) ** (4.0 / 3.0))

    @staticmethod
    def gradient(x: float, y: float) -> Tuple[float, float]:
        """Gradient (p, q); p > q exactly when y > x."""
        plus = float(np.cbrt(x + y))
        minus = float(np.cbrt(y - x))
        return 0.5 * _C * (plus + minus), 0.5 * _C * (plus - minus)

    @staticmethod
    def angle(x: float, y: float) -> float:
        """Argument of the approximate gradient, used as the outer starting angle."""
        p, q = FirstApproximation.gradient(x, y)
        return math.atan2(q, p)
