# app/core/constants.py

"""
Toolkit-wide constants.
Centralized location for series structure, geometry, thresholds and enums.
"""

import math
from enum import Enum


# ==================== Series Constants ====================

class SeriesConstants:
    """Structure shared by every m_n-indexed series."""

    PREFACTOR = 8.0 / math.pi          # W, U and their derivatives
    THETA_PREFACTOR = 4.0 / math.pi    # U_theta = (4/pi) theta2(2 theta, r^16)
    MODE_STEP = 4
    MODE_OFFSET = 2                    # m_n = 4n - 2
    NOME_POWER = 16                    # q = r^16
    DIAGONAL_PRODUCT_POWER = 32        # U_r(r, pi/4) factors (1 - r^{32k})^3

    # Reference sums on r = 1
    BOUNDARY_FOURIER_TERMS = 100_000

    # Extended-precision evaluation
    EXTENDED_ABS_TOL = 1e-18
    EXTENDED_DPS = 40


# ==================== Geometry ====================

class Geometry:
    """The square [0, 2]^2, its center and the fundamental quadrant [0, 1]^2."""

    SIDE = 2.0
    CENTER = 1.0
    SQRT2 = math.sqrt(2.0)
    QUARTER_PI = math.pi / 4.0
    HALF_PI = math.pi / 2.0


# ==================== First Approximation ====================

class FirstApproximationConstants:
    """Leading-term minimax, exact when W is cut after its first term."""

    C = (3.0 * math.pi) ** (1.0 / 3.0) / 2.0
    CORNER_ESTIMATE = 0.375 * (6.0 * math.pi) ** (1.0 / 3.0)   # 0.99800...


# ==================== Disproof Defaults ====================

class DisproofDefaults:
    """Sampling of d(r) = U(r, pi/4) - r."""

    MIN_SAMPLES = 100
    DEFAULT_SAMPLES = 400
    GEOMETRIC_LEVELS = 30      # radii 1 - 2^-k, k = 1..30
    GOLDEN_TOL = 1e-10
    CROSSING_XTOL = 1e-14
    EDGE_RADIUS = 1.0 - 1e-4


# ==================== Verification Tolerances ====================

class VerificationTolerances:
    """Acceptance tolerances of the invariant suites."""

    PDE_RESIDUAL = 1e-10
    THETA2_AGREEMENT = 1e-12
    THETA_IDENTITY = 1e-12
    BOUNDARY_FOURIER = 1e-8
    EXTENDED_PRECISION = 1e-14
    UR_EDGE = 1e-3
    FIRST_ORDER_FACTOR = 10.0
    DENSE_GRID = 1e-6
    GRADIENT_FD = 1e-8
    GRADIENT_FD_STEP = 1e-5
    SWAP_SYMMETRY = 1e-12
    BOUNDARY_VALUE = 1e-12
    BOUNDS_SLACK = 1e-9
    INFINITY_HARMONIC = 1e-9
    DETERMINANT = 1e-8
    MEDIAN_JUMP = 1e-8
    MEDIAN_OFFSETS = (1e-3, 2e-4)
    MEDIAN_CROSSING = 2.0       # jump across a median <= 4 delta / (1 - t)
    DIAGONAL_ENVELOPE = 5.0     # jump across the diagonal <= 5 t^(1/3)
    TRANSVERSE_RATIO = 5.0
    TRANSVERSE_CEILING = -50.0
    CORNER_ESTIMATE = 1e-5
    FIRST_APPROXIMATION = 1e-5
    SMALL_GRADIENT = 0.3
    THETA_INTEGRAL = 1e-9
    EDGE_SLOPE = 1e-3
    SLOPE_FD = 1e-6
    UR_FORMS = 1e-10
    HESSIAN_FD = 1e-5
    HESSIAN_FD_STEP = 1e-4
    TRANSVERSE_CONSISTENCY = 1e-8
    HEAT_RESIDUAL = 1e-6
    HEAT_FD_STEP = 2e-3
    DISPROOF_MIN_GAP = 5e-3


# ==================== Exit Codes ====================

class ExitCode:
    """Process exit codes of the command line."""

    SUCCESS = 0
    VERIFICATION_FAILURE = 1
    USAGE_ERROR = 2


CSV_COLUMNS = ("x", "y", "u", "ux", "uy", "region")
DIAGONAL_COLUMNS = ("s", "g", "u", "g_prime")


# ==================== Enums ====================

class RegionTag(str, Enum):
    """Region of the square a point is dispatched to."""
    INTERIOR = "interior-off-diagonal"
    DIAGONAL = "diagonal"
    MEDIAN = "median"
    BOUNDARY = "boundary"
    CENTER = "center"


class SeriesForm(str, Enum):
    """Representation used for theta2 and U_r on the diagonal."""
    SERIES = "series"
    PRODUCT = "product"


class OutputFormat(str, Enum):
    """Export formats."""
    CSV = "csv"
    JSON = "json"


class VerifySuite(str, Enum):
    """Invariant suites run by the verify command."""
    SERIES = "series"
    MINIMAX = "minimax"
    FIELD = "field"
    ANALYSIS = "analysis"
    ALL = "all"


class Command(str, Enum):
    """Command line subcommands."""
    EVAL = "eval"
    GRID = "grid"
    DIAGONAL = "diagonal"
    VERIFY = "verify"
    ORACLE = "oracle"
    THETA = "theta"


class SweepOrder(str, Enum):
    """Update order of the discrete midpoint iteration."""
    JACOBI = "jacobi"
    RED_BLACK = "red-black"


class Initialization(str, Enum):
    """Starting iterate of the discrete solve."""
    LOWER_BOUND = "lower-bound"
    ONES = "ones"
