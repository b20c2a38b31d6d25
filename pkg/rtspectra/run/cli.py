"""CLI."""
import argparse
import logging
import os
import sys
from typing import List, Optional

from rtspectra.errors import ConfigurationError, RTSpectraError
from rtspectra.logging.setup import setup_logging
from rtspectra.run.commands import run_command, str2command
from rtspectra.run.config import load_config

logger = logging.getLogger(__name__)

THREADS_ENV = "RT_SPECTRA_THREADS"


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="rt-spectra",
        description="Linear Rayleigh-Taylor growth rates of two viscous "
        "compressible layers",
    )
    parser.add_argument("command", type=str, choices=list(str2command))
    parser.add_argument("--config", required=True, type=str,
                        help="JSON or YAML run configuration.")
    parser.add_argument("--out", default=None, type=str,
                        help="Output directory; overrides outputs.directory.")
    parser.add_argument("--threads", default=None, type=int,
                        help=f"Worker count; {THREADS_ENV} takes precedence.")
    parser.add_argument("--log-config", default=None, type=str,
                        help="YAML logging configuration.")
    parser.add_argument("--log-level", default=None, type=str,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser.parse_args(argv)


def resolve_threads(cli_threads: Optional[int]) -> Optional[int]:
    """RT_SPECTRA_THREADS, then --threads; None defers to the config."""
    env = os.environ.get(THREADS_ENV)
    if env is not None:
        try:
            threads = int(env)
        except ValueError as e:
            raise ConfigurationError(
                f"must be an integer, got {env!r}", THREADS_ENV
            ) from e
    else:
        threads = cli_threads
    if threads is not None and threads < 1:
        raise ConfigurationError(f"must be >= 1, got {threads}", "threads")
    return threads


def main(argv: Optional[List[str]] = None) -> int:
    """CLI."""
    args = _parse_args(argv)
    setup_logging(args.log_config, args.log_level)
    try:
        threads = resolve_threads(args.threads)
        cfg = load_config(args.config)
    except RTSpectraError as e:
        logger.error(str(e))
        return e.exit_code
    if args.log_config is not None:
        # log files go next to the results of this run
        out_dir = args.out if args.out is not None else cfg.outputs.directory
        setup_logging(args.log_config, args.log_level, log_dir=out_dir)
    return run_command(args.command, cfg, args.out, threads)


if __name__ == "__main__":
    sys.exit(main())
