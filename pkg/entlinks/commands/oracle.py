"""`oracle-check`: correlation-matrix entropies against the Fock oracle."""

import argparse
import logging
from pathlib import Path

from entlinks.services import oracle_service

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9


def handle(args: argparse.Namespace) -> int:
    frame = oracle_service.equivalence_sweep(args.sizes, args.samples, args.seed)
    worst = float(frame["deviation"].max())
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        frame.to_csv(args.out / "oracle.csv", index=False, lineterminator="\n")
    print(f"{len(frame)} comparisons, max deviation {worst:.3e}")
    if worst >= TOLERANCE:
        logger.error("Oracle deviation %.3e exceeds %.0e", worst, TOLERANCE)
        return 2
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("oracle-check", help="randomized oracle equivalence sweep")
    parser.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6])
    parser.add_argument("--samples", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=Path, help="directory for oracle.csv")
    parser.set_defaults(handler=handle)
