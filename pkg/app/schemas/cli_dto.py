"""Command line data transfer objects."""

from typing import List, Optional

from pydantic import BaseModel, Field

from app.core.constants import Command, OutputFormat
from app.schemas.minimax_dto import SolverPolicy
from app.schemas.polar_dto import SeriesPolicy


class RunConfig(BaseModel):
    """Resolved invocation of one subcommand.

    Attributes:
        command: Subcommand
        series: Series policy after flag overrides
        solver: Solver policy after flag overrides
        output_path: Destination file, stdout when absent
        format: Export format
    """
    command: Command
    series: SeriesPolicy = Field(default_factory=SeriesPolicy)
    solver: SolverPolicy = Field(default_factory=SolverPolicy)
    output_path: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON


class CheckResult(BaseModel):
    """Outcome of one invariant check.

    Attributes:
        name: Check label
        passed: Pass flag
        measured: Measured quantity (worst case over the sample)
        tolerance: Threshold the measured quantity is held to
        detail: Free-form context
    """
    name: str
    passed: bool
    measured: Optional[float] = None
    tolerance: Optional[float] = None
    detail: Optional[str] = None


class VerificationReport(BaseModel):
    """All checks of a suite run."""
    suite: str
    passed: bool
    checks: List[CheckResult]

    @property
    def failed(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]
