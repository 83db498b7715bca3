"""
Command-line runner for the verification suites and noise sweeps.

    python -m app.main verify-gates --gates S,T --tolerance 1e-12
    python -m app.main simulate-qrm --config qrm.json --trials 30 --seed 7
    python -m app.main defaults > experiment.json

Exit status: 0 every record passes, 1 a tolerance failure, 2 a config
error, 3 a numerical failure.
"""
from typing import Any, Dict, List, Optional

import argparse
import logging
import sys

from app import __version__
from app.core.errors import EXIT_NUMERICAL_FAILURE, EXIT_OK, ToolkitError
from app.core.logging import setup_logging
from app.langgraph.graph import graph
from app.schemas.config import ExperimentConfig, ExperimentKind

logger = logging.getLogger(__name__)

# Which tolerance --tolerance replaces for each experiment
PRIMARY_TOLERANCE = {
    ExperimentKind.VERIFY_GATES.value: "gate",
    ExperimentKind.VERIFY_PROTECTION.value: "holonomy",
    ExperimentKind.SIMULATE_QRM.value: "single_qubit_fidelity",
    ExperimentKind.NOISE_SWEEP.value: "dfs",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holonomic-toolkit",
        description="Simulate and verify protected holonomic gates on spin and QRM models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="overrides LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    for kind in ExperimentKind:
        cmd = sub.add_parser(kind.value, help=f"run the {kind.value} experiment")
        cmd.add_argument("--config", metavar="PATH", help="JSON experiment config")
        cmd.add_argument("--seed", type=int)
        cmd.add_argument("--out", metavar="PATH", help="report path (JSON; sweeps add a CSV alongside)")
        cmd.add_argument("--trials", type=int)
        cmd.add_argument("--tolerance", type=float, help="overrides the experiment's primary tolerance")
        cmd.add_argument("--gates", help="comma-separated gate names, e.g. X,S,CZ")

    sub.add_parser("defaults", help="print the default experiment config")
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.out:
        overrides["output"] = args.out
    if args.gates:
        overrides["gates"] = args.gates
    if args.tolerance is not None:
        overrides["tolerances"] = {PRIMARY_TOLERANCE[args.command]: args.tolerance}
    return overrides


def run_experiment(command: str, config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Runs the experiment pipeline and returns its final state."""
    return graph.invoke({
        "command": command,
        "config_path": config_path,
        "overrides": overrides or {},
    })


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    if args.command == "defaults":
        print(ExperimentConfig().model_dump_json(indent=2))
        return EXIT_OK

    try:
        state = run_experiment(args.command, args.config, overrides_from_args(args))
    except ToolkitError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected failure in {args.command}: {e}", exc_info=True)
        return EXIT_NUMERICAL_FAILURE

    exit_code = state.get("exit_code", EXIT_NUMERICAL_FAILURE)
    if state.get("error"):
        logger.error(f"{args.command}: {state['error']}")
    elif state.get("output_path"):
        logger.info(f"{args.command}: exit {exit_code}, report at {state['output_path']}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
