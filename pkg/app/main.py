"""Command Line Entry Point.

Builds the argument parser, resolves settings from flag overrides,
configures logging and dispatches to the subcommand handlers.

Usage:
    python -m app.main eval 0.5 0.5
    python -m app.main grid --nx 201 --ny 201 --out grid.csv --format csv
    python -m app.main verify --suite all

Exit codes: 0 success, 1 failed verification, 2 usage, domain or I/O error.
"""

import argparse
import sys
from typing import Dict, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.cli.commands import HANDLERS, CommandContext
from app.core.config import Settings
from app.core.constants import (
    Command,
    ExitCode,
    Initialization,
    OutputFormat,
    SeriesForm,
    SweepOrder,
    VerifySuite,
)
from app.core.exceptions import ApplicationError, ConfigurationError
from app.core.logging_config import cli_logger, setup_logging
from app.schemas.cli_dto import RunConfig
from app.schemas.minimax_dto import SolverPolicy
from app.schemas.polar_dto import SeriesPolicy


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--abs-tol", type=float, default=None,
                        help="series truncation tolerance (default 1e-15)")
    common.add_argument("--root-tol", type=float, default=None,
                        help="residual tolerance of the minimax solves (default 1e-13)")
    common.add_argument("--log-level", default=None,
                        help="DEBUG, INFO, WARNING, ERROR or CRITICAL (default WARNING)")
    return common


def _output_options() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", default=None, help="output file (default stdout)")
    output.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value,
                        help="export format (default csv)")
    return output


def build_parser() -> argparse.ArgumentParser:
    """
    Build the subcommand parser.

    Returns:
        argparse.ArgumentParser: Parser rejecting unknown flags
    """
    parser = argparse.ArgumentParser(
        prog="app.main",
        description="Explicit infinity-potential of the punctured square",
    )
    common = _common_options()
    output = _output_options()
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(Command.EVAL.value, parents=[common], help="evaluate one point")
    p_eval.add_argument("x", type=float)
    p_eval.add_argument("y", type=float)

    p_grid = sub.add_parser(Command.GRID.value, parents=[common, output], help="sample a grid of [0, 2]^2")
    p_grid.add_argument("--nx", type=int, required=True)
    p_grid.add_argument("--ny", type=int, required=True)

    p_diag = sub.add_parser(Command.DIAGONAL.value, parents=[common, output], help="tabulate the diagonal")
    p_diag.add_argument("--n", type=int, required=True)

    p_verify = sub.add_parser(Command.VERIFY.value, parents=[common], help="run invariant suites")
    p_verify.add_argument("--suite", choices=[s.value for s in VerifySuite], default=VerifySuite.ALL.value)

    p_oracle = sub.add_parser(Command.ORACLE.value, parents=[common, output],
                              help="finite-difference cross-check")
    p_oracle.add_argument("--n", type=int, required=True, help="odd number of nodes per side")
    p_oracle.add_argument("--stencil-radius", type=int, default=None, help="ball radius in cells (default 3)")
    p_oracle.add_argument("--sweep-order", choices=[o.value for o in SweepOrder], default=SweepOrder.JACOBI.value)
    p_oracle.add_argument("--init", choices=[i.value for i in Initialization],
                          default=Initialization.LOWER_BOUND.value)

    p_theta = sub.add_parser(Command.THETA.value, parents=[common], help="evaluate theta2(z, q)")
    p_theta.add_argument("z", type=float)
    p_theta.add_argument("q", type=float)
    p_theta.add_argument("--form", choices=[f.value for f in SeriesForm], default=None)

    return parser


def resolve_config(args: argparse.Namespace) -> Tuple[Settings, RunConfig]:
    """
    Turn parsed flags into settings overrides and a run configuration.

    Raises:
        ConfigurationError: If an override fails validation
    """
    overrides: Dict[str, object] = {}
    if args.abs_tol is not None:
        overrides["SERIES_ABS_TOL"] = args.abs_tol
    if args.root_tol is not None:
        overrides["SOLVER_ROOT_TOL"] = args.root_tol
    if args.log_level is not None:
        overrides["LOG_LEVEL"] = args.log_level
    try:
        cfg = Settings(**overrides)
        config = RunConfig(
            command=Command(args.command),
            series=SeriesPolicy.from_settings(cfg),
            solver=SolverPolicy.from_settings(cfg),
            output_path=getattr(args, "out", None),
            format=OutputFormat(getattr(args, "format", OutputFormat.JSON.value)),
        )
    except ValidationError as exc:
        error = exc.errors()[0]
        setting = ".".join(str(part) for part in error.get("loc", ())) or "settings"
        raise ConfigurationError(setting, error.get("msg", str(exc))) from exc
    return cfg, config


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name; sys.argv when absent

    Returns:
        int: Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ExitCode.SUCCESS if exc.code in (0, None) else ExitCode.USAGE_ERROR

    try:
        cfg, config = resolve_config(args)
        setup_logging(cfg.LOG_LEVEL)
        cli_logger.debug(f"Running {config.command.value} with {config.model_dump(mode='json')}")
        return HANDLERS[config.command](args, CommandContext(cfg, config))
    except ApplicationError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return ExitCode.USAGE_ERROR
    except OSError as exc:
        print(f"error: cannot write {exc.filename or 'output'}: {exc.strerror}", file=sys.stderr)
        return ExitCode.USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
