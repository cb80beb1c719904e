# Schemas package initialization
"""Data Transfer Objects (DTOs) for the toolkit.

This module provides Pydantic models for validating inputs to the services
and serializing their results.
"""

from app.schemas.polar_dto import PolarPoint, SeriesPolicy, SeriesTerm, WPartials
from app.schemas.minimax_dto import PlanePoint, SolverPolicy, MinimaxResult
from app.schemas.field_dto import FieldSample, DiagonalMap, DiagonalValue
from app.schemas.analysis_dto import DisproofReport
from app.schemas.oracle_dto import GridSpec, DiscreteSolution, FieldComparison
from app.schemas.cli_dto import RunConfig, CheckResult, VerificationReport

__all__ = [
    "PolarPoint",
    "SeriesPolicy",
    "SeriesTerm",
    "WPartials",
    "PlanePoint",
    "SolverPolicy",
    "MinimaxResult",
    "FieldSample",
    "DiagonalMap",
    "DiagonalValue",
    "DisproofReport",
    "GridSpec",
    "DiscreteSolution",
    "FieldComparison",
    "RunConfig",
    "CheckResult",
    "VerificationReport",
]
