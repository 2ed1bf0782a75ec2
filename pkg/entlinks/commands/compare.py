"""`compare`: report measured against predicted entropies."""

import argparse
from pathlib import Path

from entlinks.services import experiment_service


def handle(args: argparse.Namespace) -> int:
    files = experiment_service.run_comparison(args.measured, args.predicted, args.out, sigma=args.sigma)
    print(f"{len(files)} files written to {args.out}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("compare", help="residuals and crossing times from CSV artifacts")
    parser.add_argument("--measured", required=True, type=Path, help="entropy.csv of a run")
    parser.add_argument("--predicted", required=True, type=Path, help="predictions.csv")
    parser.add_argument("--out", required=True, type=Path, help="output directory")
    parser.add_argument("--sigma", type=float, help="saturation density used for the predictions")
    parser.set_defaults(handler=handle)
