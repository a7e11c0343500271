"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or format error (including
missing files), 3 numerical abort. Every run writes ``manifest.json`` to the
output directory before any other output.
"""

import argparse
import logging
import sys
from typing import List, Optional

from src import __version__
from src.commands import COMMAND_MODULES
from src.config import LoggingConfig
from src.errors import ContractError, FormatError, NumericalError
from src.manifest import RunManifest

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_NUMERICAL = 0, 1, 2, 3


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with code 1 instead of argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="noun2verb", description="Denominal verb comprehension and production models")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, help="Seed for every random choice of the run")
    parser.add_argument("--out", default="out", help="Output directory")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for module in COMMAND_MODULES:
        module.register_command(subparsers)
    return parser


def configure_logging(level: Optional[str]) -> None:
    if level is None:
        config = LoggingConfig.from_env()
        config.validate()
        level = config.level
    logging.basicConfig(
        level=getattr(logging, level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        force=True,
    )


def _settings(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("handler", "inputs")}


def dispatch(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    try:
        configure_logging(args.log_level)
    except ContractError as e:
        print(f"noun2verb: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    manifest = RunManifest.for_run(args.command, args.seed, _settings(args), args.inputs(args))
    manifest.write(args.out)
    logger.info(f"noun2verb {__version__}: {args.command}")
    try:
        args.handler(args, manifest)
        code = EXIT_OK
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        code = EXIT_NUMERICAL
    except (FormatError, FileNotFoundError) as e:
        logger.error(f"Input error: {e}")
        code = EXIT_FORMAT
    except ContractError as e:
        logger.error(f"Invalid request: {e}")
        code = EXIT_USAGE
    manifest.finish(args.out, code)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
