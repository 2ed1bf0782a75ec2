"""`predict`: front-engine entropies for the configured blocks and times."""

import argparse

from entlinks.commands import add_config_arguments, load_config, output_dir
from entlinks.services import experiment_service


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    out = output_dir(args, cfg)
    files = experiment_service.run_predictions(cfg, out, sigma=args.sigma, threads=args.threads)
    print(f"{len(files)} files written to {out}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("predict", help="quasiparticle-picture predictions")
    add_config_arguments(parser)
    parser.add_argument("--sigma", type=float, help="saturation entropy density; fitted when omitted")
    parser.set_defaults(handler=handle)
