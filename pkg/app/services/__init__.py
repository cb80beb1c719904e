# Services package initialization
"""Numerical services: series core, minimax solver, glued field, analysis,
finite-difference oracle and the invariant suites."""

from app.services.series_core import SeriesCalculator
from app.services.root_finding import RootResult, safeguarded_newton
from app.services.first_approximation import FirstApproximation
from app.services.minimax_solver import DenseGridMinimax, MinimaxSolver
from app.services.potential_field import PotentialField
from app.services.analysis import AnalysisService
from app.services.fd_oracle import InfinityLaplaceOracle
from app.services.verification import VerificationRunner

__all__ = [
    "SeriesCalculator",
    "RootResult",
    "safeguarded_newton",
    "FirstApproximation",
    "DenseGridMinimax",
    "MinimaxSolver",
    "PotentialField",
    "AnalysisService",
    "InfinityLaplaceOracle",
    "VerificationRunner",
]
