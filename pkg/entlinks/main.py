"""Command-line entry point."""

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path

from pydantic import ValidationError

from entlinks.commands import compare, oracle, predict, run, wave
from entlinks.config import settings
from entlinks.exceptions import ConfigError, EntlinksError

logger = logging.getLogger("entlinks")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def setup_logging(verbose: int = 0) -> Path:
    """Timestamped log file under settings.log_dir plus stderr."""
    log_dir = Path(settings.log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    log_file = log_dir / f"entlinks_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"

    level = logging.DEBUG if verbose > 1 else logging.INFO if verbose else settings.log_level
    formatter = logging.Formatter(LOG_FORMAT)
    file_handler = logging.FileHandler(log_file)
    file_handler.setFormatter(formatter)
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)

    logging.root.addHandler(file_handler)
    logging.root.addHandler(stream_handler)
    logger.setLevel(level)
    return log_file


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entlinks",
        description="Free-fermion quench simulator and entanglement-link toolkit.",
    )
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: settings)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (run, predict, compare, wave, oracle):
        command.register(subparsers)
    return parser


def _validation_lines(exc: ValidationError) -> list[str]:
    return [
        f"{' -> '.join(str(part) for part in error['loc']) or 'input'}: {error['msg']}"
        for error in exc.errors()
    ]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION

    setup_logging(args.verbose)
    if args.threads is not None:
        if args.threads < 1:
            print("--threads must be at least 1", file=sys.stderr)
            return EXIT_VALIDATION
        settings.threads = args.threads

    try:
        return args.handler(args)
    except ConfigError as exc:
        logger.warning("Invalid configuration: %s", exc)
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        lines = _validation_lines(exc)
        logger.warning("Validation error: %s", lines)
        print("\n".join(lines), file=sys.stderr)
        return EXIT_VALIDATION
    except (EntlinksError, OSError) as exc:
        logger.exception("Run failed")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception:
        logger.exception("Unhandled exception in %s", args.command)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
