"""CLI subcommands.

Each module exposes register(subparsers), which adds its parser and sets
`handler` to a function taking the parsed arguments and returning an
exit code.
"""

import argparse
from pathlib import Path

from entlinks.config import settings
from entlinks.models.experiment import ExperimentConfig
from entlinks.services.config_service import parse_config


def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, type=Path, help="experiment config file")
    parser.add_argument("--out", type=Path, help="output directory (default: <output_dir>/<name>)")
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config value, section.key=value for sectioned keys (repeatable)",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=argparse.SUPPRESS,
        help="worker threads, same as the global option",
    )


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    text = args.config.read_text(encoding="utf-8")
    return parse_config(text, args.override)


def output_dir(args: argparse.Namespace, cfg: ExperimentConfig) -> Path:
    return args.out or Path(settings.output_dir) / cfg.name
