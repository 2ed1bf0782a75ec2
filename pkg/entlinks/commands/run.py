"""`run`: full quench experiment."""

import argparse
import logging

from entlinks.commands import add_config_arguments, load_config, output_dir
from entlinks.services import experiment_service

logger = logging.getLogger(__name__)


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    out = output_dir(args, cfg)
    files = experiment_service.run_experiment(cfg, out, threads=args.threads)
    print(f"{len(files)} files written to {out}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="evolve, measure and write all requested artifacts")
    add_config_arguments(parser)
    parser.set_defaults(handler=handle)
