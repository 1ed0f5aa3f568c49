"""Command-line experiment runner.

Every subcommand takes an optional --config JSON file whose "parameters"
object is overlaid with the flags given on the command line; `run CONFIG`
dispatches on the file's "command". Exit codes: 0 on success, 1 on usage,
configuration or domain errors, 2 when a verification fails.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path as FilePath
from typing import Any, NoReturn

from pydantic import ValidationError

from ..martingale.bounds import (
    BetaParams,
    BoundParams,
    ExponentVariant,
    VariantParams,
    b0,
    b1,
    b2,
    b_subgamma,
    c_beta,
    c_tilde,
    large_deviation_bound,
    selfnorm_bound,
    theorem2_bound,
)
from ..martingale.errors import ConfigError, TailBoundsError
from .config import FLOAT_FORMAT
from .curve import exponent_curve
from .enumeration import exact_event_probability
from .lemma_suite import run_lemma_suite, run_scalar_suite
from .montecarlo import estimate_event, make_row, verify_domination
from .report import ReportRow, ReportTable
from .selfnorm import selfnorm_experiment
from .settings import (
    BoundCommand,
    BoundKind,
    CommandName,
    CommandParameters,
    CurveCommand,
    ExactCommand,
    ExperimentConfig,
    LemmasCommand,
    SelfnormCommand,
    SimulateCommand,
    TightnessCommand,
    VerifyCommand,
    load_config,
)
from .tightness import tightness_twopoint

_LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2

# flags that are not experiment parameters
_CONTROL_FLAGS = frozenset({"command", "config", "verbose"})


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per cell")
    parser.add_argument("--workers", type=int, help="worker processes")
    parser.add_argument("--delta", type=float, help="confidence failure probability")


def _add_output_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", help="CSV file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pytailbounds", description="Martingale tail bounds.")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for debug output",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    bound = commands.add_parser("bound", help="print one bound or constant")
    bound.add_argument("--config", type=FilePath)
    bound.add_argument("--kind", choices=[kind.value for kind in BoundKind])
    bound.add_argument("--x", type=float)
    bound.add_argument("--y", type=float)
    bound.add_argument("--v", type=float)
    bound.add_argument("--beta", type=float)
    bound.add_argument("--b", type=float)
    bound.add_argument("--n", type=int)
    bound.add_argument("--which", choices=["PAPER", "DERIVED"])

    curve = commands.add_parser("curve", help="exponent family over a lambda grid")
    curve.add_argument("--config", type=FilePath)
    curve.add_argument("--variant", choices=[v.value for v in ExponentVariant])
    curve.add_argument("--x", type=float)
    curve.add_argument("--y", type=float)
    curve.add_argument("--v", type=float)
    curve.add_argument("--beta", type=float)
    curve.add_argument("--lambda-max", dest="lambda_max", type=float)
    curve.add_argument("--points", type=int)
    _add_output_flag(curve)

    tightness = commands.add_parser("tightness", help="two-point Chernoff table")
    tightness.add_argument("--config", type=FilePath)
    tightness.add_argument("--x", type=float)
    tightness.add_argument("--y", type=float)
    tightness.add_argument("--v", type=float)
    tightness.add_argument("--n-list", dest="n_list", type=int, nargs="+")
    tightness.add_argument("--resolution", type=int)
    _add_output_flag(tightness)

    for name, text in (
        ("simulate", "estimate event probabilities"),
        ("verify", "check simulated events against bounds"),
        ("selfnorm", "self-normalized maximum against both constants"),
    ):
        sub = commands.add_parser(name, help=text)
        sub.add_argument("--config", type=FilePath, required=True)
        _add_run_flags(sub)
        _add_output_flag(sub)
        if name == "verify":
            sub.add_argument(
                "--falsify",
                action="store_true",
                default=None,
                help="shrink every bound to check that failures are detected",
            )

    lemmas = commands.add_parser("lemmas", help="randomized lemma suite")
    lemmas.add_argument("--config", type=FilePath)
    lemmas.add_argument("--seed", type=int)
    lemmas.add_argument("--models", type=int)
    _add_output_flag(lemmas)

    exact = commands.add_parser("exact", help="exact probability by enumeration")
    exact.add_argument("--config", type=FilePath, required=True)

    run = commands.add_parser("run", help="run the command named in a config file")
    run.add_argument("config", type=FilePath)
    _add_run_flags(run)
    _add_output_flag(run)
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {
        key: value
        for key, value in vars(args).items()
        if key not in _CONTROL_FLAGS and value is not None
    }


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge the optional config file with command-line flags.

    Raises:
        ConfigError: If the file names another command or a flag does not
            apply to the command
    """
    if args.config is not None:
        config = load_config(args.config)
        if args.command != "run" and config.command != args.command:
            raise ConfigError(
                f"{args.config} configures {config.command!s}, not {args.command}"
            )
    else:
        config = ExperimentConfig(command=CommandName(args.command))
    return config.with_overrides(_overrides(args))


def _required(cmd: BoundCommand, *names: str) -> list[Any]:
    missing = [name for name in names if getattr(cmd, name) is None]
    if missing:
        raise ConfigError(f"bound {cmd.kind} requires {', '.join(missing)}")
    return [getattr(cmd, name) for name in names]


def evaluate_bound(cmd: BoundCommand) -> float:
    """Value of the bound or constant selected by cmd.kind."""
    match cmd.kind:
        case BoundKind.B0 | BoundKind.B1 | BoundKind.B2 | BoundKind.B_SUBGAMMA:
            x, v = _required(cmd, "x", "v")
            function = {
                BoundKind.B0: b0,
                BoundKind.B1: b1,
                BoundKind.B2: b2,
                BoundKind.B_SUBGAMMA: b_subgamma,
            }[cmd.kind]
            return function(BoundParams(x=x, y=cmd.y, v=v))
        case BoundKind.THEOREM2:
            x, v, beta = _required(cmd, "x", "v", "beta")
            return theorem2_bound(BetaParams(x=x, v=v, beta=beta))
        case BoundKind.SELFNORM:
            x, beta = _required(cmd, "x", "beta")
            return selfnorm_bound(x, beta, cmd.which)
        case BoundKind.C_BETA:
            (beta,) = _required(cmd, "beta")
            return c_beta(beta)
        case BoundKind.C_TILDE:
            (beta,) = _required(cmd, "beta")
            return c_tilde(beta, cmd.which)
        case BoundKind.LARGE_DEVIATION:
            x, b, beta, n = _required(cmd, "x", "b", "beta", "n")
            return large_deviation_bound(x, b, beta, n)


def _output(path: str | None) -> FilePath | None:
    return FilePath(path) if path is not None else None


def _curve_params(cmd: CurveCommand) -> VariantParams:
    if cmd.variant is ExponentVariant.BETA:
        if cmd.beta is None:
            raise ConfigError("curve BETA requires beta")
        return BetaParams(x=cmd.x, v=cmd.v, beta=cmd.beta)
    return BoundParams(x=cmd.x, y=cmd.y, v=cmd.v)


def _simulate(cmd: SimulateCommand) -> ReportTable[ReportRow]:
    label = cmd.model_id if cmd.model_id is not None else cmd.model.describe()
    table: ReportTable[ReportRow] = ReportTable(ReportRow)
    for spec in cmd.events:
        estimate = estimate_event(
            cmd.model, spec, cmd.trials, cmd.seed, cmd.delta, cmd.workers
        )
        _LOG.info("%s %s x=%g: p_hat=%.6g", label, spec.mode, spec.x, estimate.p_hat)
        table.record(make_row(label, spec, estimate))
    return table


def execute(parameters: CommandParameters) -> int:
    """Run one validated command and return its exit code."""
    match parameters:
        case BoundCommand():
            print(format(evaluate_bound(parameters), FLOAT_FORMAT))
        case CurveCommand():
            exponent_curve(
                parameters.variant,
                _curve_params(parameters),
                parameters.points,
                parameters.lambda_max,
            ).save(_output(parameters.output))
        case SimulateCommand():
            _simulate(parameters).save(_output(parameters.output))
        case VerifyCommand():
            table = verify_domination(
                parameters.model,
                parameters.cells,
                parameters.trials,
                parameters.seed,
                parameters.delta,
                parameters.workers,
                parameters.model_id,
                parameters.falsify,
            )
            table.save(_output(parameters.output))
            return EXIT_OK if table.passed() else EXIT_FAILED
        case TightnessCommand():
            tightness_twopoint(
                parameters.x,
                parameters.y,
                parameters.v,
                parameters.n_list,
                parameters.resolution,
            ).save(_output(parameters.output))
        case SelfnormCommand():
            table = selfnorm_experiment(
                parameters.model,
                parameters.beta,
                parameters.x_grid,
                parameters.n,
                parameters.trials,
                parameters.seed,
                parameters.delta,
                parameters.workers,
                parameters.model_id,
            )
            table.save(_output(parameters.output))
            return EXIT_OK if table.passed() else EXIT_FAILED
        case LemmasCommand():
            lemmas = run_lemma_suite(parameters.seed, parameters.models)
            for row in run_scalar_suite(parameters.scalar_points).get_all():
                lemmas.record(row)
            lemmas.save(_output(parameters.output))
            return EXIT_OK if lemmas.passed() else EXIT_FAILED
        case ExactCommand():
            probability = exact_event_probability(parameters.model, parameters.event)
            print(format(probability, FLOAT_FORMAT))
    return EXIT_OK


def run(config: ExperimentConfig) -> int:
    """Validate and execute a configuration."""
    return execute(config.resolve())


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(config_from_args(args))
    except (TailBoundsError, ValidationError, ValueError, OSError) as exc:
        print(f"pytailbounds: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
