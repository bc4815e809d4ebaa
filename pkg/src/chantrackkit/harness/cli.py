# Standard Libraries
import argparse
import json
import logging
import sys
from typing import Optional, Sequence

# Top-Level Imports
from chantrackkit.data_classes import Scenario
from chantrackkit._errors import ChannelKitError, ConfigError
from chantrackkit.utils import LOG_LEVEL_ENV, configure_logging

# Relative Imports
from .config import ExperimentConfig, apply_overrides, load_config
from .outputs import emit_outputs
from .runner import iter_point_rows, sort_rows
from .scenarios import DESCRIPTIONS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file of experiment settings")
    parser.add_argument(
        "--scenario", choices=[str(s) for s in Scenario], help="experiment family"
    )
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--snr", type=float, nargs="+", dest="snr_db", help="SNR sweep in dB")
    parser.add_argument("--bits", type=int, nargs="+", help="quantizer resolutions")
    parser.add_argument("--trials", type=int, dest="num_trials", help="trials per point")
    parser.add_argument("--workers", type=int, help="worker processes")
    parser.add_argument("--out", help="output directory")
    parser.add_argument(
        "--full-scale",
        action="store_true",
        help="N=128 and M=32 instead of the desk-scale defaults",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chantrackkit",
        description="Monte-Carlo experiments for quantized channel learning and tracking.",
    )
    parser.add_argument(
        "--log-level",
        help=f"logging level (default from ${LOG_LEVEL_ENV}, else WARNING)",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="run an experiment and write its outputs")
    _add_config_args(run)
    run.set_defaults(func=cmd_run)

    show = sub.add_parser("list-scenarios", help="list the experiment families")
    show.set_defaults(func=cmd_list_scenarios)

    check = sub.add_parser(
        "validate-config", help="resolve settings and print them as JSON"
    )
    _add_config_args(check)
    check.set_defaults(func=cmd_validate_config)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then the config file, then command-line overrides."""
    config = load_config(args.config)
    return apply_overrides(
        config,
        full_scale=args.full_scale,
        scenario=args.scenario,
        seed=args.seed,
        snr_db=args.snr_db,
        bits=args.bits,
        num_trials=args.num_trials,
        workers=args.workers,
        out=args.out,
    )


def cmd_run(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    scenario = str(config.scenario)
    rows = []
    csv_path, plot_path = emit_outputs(rows, config.out, scenario)
    # outputs are rewritten whenever a sweep point completes
    for point_rows in iter_point_rows(config):
        rows = sort_rows(rows + point_rows)
        csv_path, plot_path = emit_outputs(rows, config.out, scenario)
    print(csv_path)
    print(plot_path)
    return EXIT_OK


def cmd_list_scenarios(args: argparse.Namespace) -> int:
    for scenario in Scenario:
        print(f"{scenario}\t{DESCRIPTIONS[scenario]}")
    return EXIT_OK


def cmd_validate_config(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    print(json.dumps(config.to_dict(), indent=2))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging(args.log_level)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as err:
        logger.error("Configuration error: %s", err)
        return EXIT_CONFIG
    except (ChannelKitError, OSError) as err:
        logger.error("Run failed: %s", err)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
