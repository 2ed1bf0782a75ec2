"""`wave`: wave-equation solver against the measured links."""

import argparse

from entlinks.commands import add_config_arguments, load_config, output_dir
from entlinks.services import experiment_service


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    out = output_dir(args, cfg)
    files = experiment_service.run_wave(cfg, out, threads=args.threads)
    print(f"{len(files)} files written to {out}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("wave", help="evolve the measured link field with the wave solver")
    add_config_arguments(parser)
    parser.set_defaults(handler=handle)
