"""Shared fixtures for the service tests."""

import pytest

from app.core.config import Settings
from app.schemas.minimax_dto import SolverPolicy
from app.schemas.polar_dto import SeriesPolicy
from app.services.analysis import AnalysisService
from app.services.minimax_solver import MinimaxSolver
from app.services.potential_field import PotentialField


@pytest.fixture(scope="session")
def cfg() -> Settings:
    return Settings()


@pytest.fixture(scope="session")
def series_policy(cfg) -> SeriesPolicy:
    return SeriesPolicy.from_settings(cfg)


@pytest.fixture(scope="session")
def solver_policy(cfg) -> SolverPolicy:
    return SolverPolicy.from_settings(cfg)


@pytest.fixture(scope="session")
def solver(series_policy, solver_policy) -> MinimaxSolver:
    return MinimaxSolver(series_policy, solver_policy)


@pytest.fixture(scope="session")
def field(solver, cfg) -> PotentialField:
    """One field per session so the folded-point cache is shared."""
    return PotentialField(solver, cfg)


@pytest.fixture(scope="session")
def analysis(series_policy, cfg) -> AnalysisService:
    return AnalysisService(series_policy, cfg)
