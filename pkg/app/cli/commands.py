"""Subcommand handlers.

Each handler receives the parsed arguments and the resolved run
configuration, writes its result and returns the process exit code.
"""

import argparse
import sys

import mpmath
import numpy as np

from app.cli.exporters import (
    diagonal_to_json,
    discrete_to_json,
    open_output,
    samples_to_json,
    write_diagonal_csv,
    write_discrete_csv,
    write_json,
    write_samples_csv,
)
from app.core.config import Settings
from app.core.constants import (
    Command,
    ExitCode,
    Geometry,
    Initialization,
    OutputFormat,
    SeriesForm,
    SweepOrder,
    VerifySuite,
)
from app.core.exceptions import DomainError
from app.core.logging_config import cli_logger
from app.schemas.cli_dto import RunConfig
from app.schemas.minimax_dto import PlanePoint
from app.schemas.oracle_dto import GridSpec
from app.services.analysis import AnalysisService
from app.services.fd_oracle import InfinityLaplaceOracle
from app.services.minimax_solver import MinimaxSolver
from app.services.potential_field import PotentialField
from app.services.series_core import SeriesCalculator
from app.services.verification import VerificationRunner


class CommandContext:
    """Services shared by the handlers of one invocation.

    Attributes:
        cfg: Resolved settings
        config: Run configuration
        field: Potential field built from the configured policies
    """

    def __init__(self, cfg: Settings, config: RunConfig):
        self.cfg = cfg
        self.config = config
        self.field = PotentialField(MinimaxSolver(config.series, config.solver), cfg)

    def analysis(self) -> AnalysisService:
        return AnalysisService(self.config.series, self.cfg)


# ==================== eval ====================

def cmd_eval(args: argparse.Namespace, ctx: CommandContext) -> int:
    """Single-point report: u, gradient, Hessian or the reason it is absent, region."""
    point = PlanePoint.at(args.x, args.y)
    sample = ctx.field.sample(point, include_hessian=True)
    payload = {
        "x": point.x,
        "y": point.y,
        "u": sample.u,
        "grad": list(sample.grad) if sample.grad is not None else None,
        "region_tag": sample.region_tag.value,
    }
    if sample.hessian is not None:
        payload["hessian"] = [list(row) for row in sample.hessian]
    else:
        payload["hessian_omitted"] = sample.hessian_note
    write_json(payload, sys.stdout)
    return ExitCode.SUCCESS


# ==================== grid ====================

def cmd_grid(args: argparse.Namespace, ctx: CommandContext) -> int:
    """Grid of samples over [0, 2]^2, row-major in y then x."""
    if args.nx < 2 or args.ny < 2:
        raise DomainError("(nx, ny)", (args.nx, args.ny), "integers >= 2")
    xs = np.linspace(0.0, Geometry.SIDE, args.nx)
    ys = np.linspace(0.0, Geometry.SIDE, args.ny)
    samples = [
        ctx.field.sample(PlanePoint(x=float(x), y=float(y)), include_hessian=False)
        for y in ys
        for x in xs
    ]
    cli_logger.info(f"Evaluated {len(samples)} grid samples")
    with open_output(ctx.config.output_path) as stream:
        if ctx.config.format is OutputFormat.CSV:
            write_samples_csv(samples, stream)
        else:
            write_json(samples_to_json(samples), stream)
    return ExitCode.SUCCESS


# ==================== diagonal ====================

def cmd_diagonal(args: argparse.Namespace, ctx: CommandContext) -> int:
    """Diagonal table s, g(s), u(s 1), g'(s)."""
    if args.n < 2:
        raise DomainError("n", args.n, "integers >= 2")
    values = [ctx.field.diagonal_value(float(s)) for s in np.linspace(0.0, Geometry.SQRT2, args.n)]
    with open_output(ctx.config.output_path) as stream:
        if ctx.config.format is OutputFormat.CSV:
            write_diagonal_csv(values, stream)
        else:
            write_json(diagonal_to_json(values), stream)
    return ExitCode.SUCCESS


# ==================== verify ====================

def cmd_verify(args: argparse.Namespace, ctx: CommandContext) -> int:
    """Run invariant suites; exit 1 on any failed check."""
    runner = VerificationRunner(ctx.field, ctx.analysis())
    report = runner.run(VerifySuite(args.suite))
    write_json(report.model_dump(mode="json"), sys.stdout)
    return ExitCode.SUCCESS if report.passed else ExitCode.VERIFICATION_FAILURE


# ==================== oracle ====================

def _region_grid(field: PotentialField, n: int) -> np.ndarray:
    coords = np.linspace(0.0, Geometry.SIDE, n)
    return np.array([
        [field.classify_region(PlanePoint(x=float(x), y=float(y))).value for x in coords]
        for y in coords
    ])


def cmd_oracle(args: argparse.Namespace, ctx: CommandContext) -> int:
    """Discrete solve and comparison; summary on stdout, grid to --out."""
    spec = GridSpec(
        n=args.n,
        stencil_radius=args.stencil_radius if args.stencil_radius is not None else ctx.cfg.ORACLE_STENCIL_RADIUS,
        sweep_tol=ctx.cfg.ORACLE_SWEEP_TOL,
        max_sweeps=ctx.cfg.ORACLE_MAX_SWEEPS,
        sweep_order=SweepOrder(args.sweep_order),
        initialization=Initialization(args.init),
    )
    oracle = InfinityLaplaceOracle(ctx.field)
    solution = oracle.solve_discrete(spec)
    comparison = oracle.compare_fields(spec, solution)

    summary = comparison.model_dump(mode="json", exclude={"gap_heatmap"})
    summary.update({"last_update": solution.last_update, "residual": solution.residual})
    write_json(summary, sys.stdout)

    if ctx.config.output_path is not None:
        regions = _region_grid(ctx.field, spec.n)
        with open_output(ctx.config.output_path) as stream:
            if ctx.config.format is OutputFormat.CSV:
                write_discrete_csv(solution, regions, stream)
            else:
                write_json(discrete_to_json(solution, regions), stream)
    return ExitCode.SUCCESS


# ==================== theta ====================

def cmd_theta(args: argparse.Namespace, ctx: CommandContext) -> int:
    """theta2(z, q) in both forms next to the mpmath reference."""
    policy = ctx.config.series
    series = SeriesCalculator.eval_theta2(args.z, args.q, SeriesForm.SERIES, policy)
    product = SeriesCalculator.eval_theta2(args.z, args.q, SeriesForm.PRODUCT, policy)
    chosen = SeriesForm(args.form) if args.form else None
    value = SeriesCalculator.eval_theta2(args.z, args.q, chosen, policy)
    reference = float(mpmath.jtheta(2, args.z, args.q))
    write_json(
        {
            "z": args.z,
            "q": args.q,
            "value": value,
            "series": series,
            "product": product,
            "reference": reference,
            "series_error": abs(series - reference),
            "product_error": abs(product - reference),
        },
        sys.stdout,
    )
    return ExitCode.SUCCESS


HANDLERS = {
    Command.EVAL: cmd_eval,
    Command.GRID: cmd_grid,
    Command.DIAGONAL: cmd_diagonal,
    Command.VERIFY: cmd_verify,
    Command.ORACLE: cmd_oracle,
    Command.THETA: cmd_theta,
}
