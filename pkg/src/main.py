"""Main entry point for the miebound command line."""

import logging
import sys
from typing import List, Optional, TextIO

from src.cli.commands import build_parser
from src.utils.config import CliSettings, use_settings
from src.utils.error_handler import (
    EXIT_OK,
    MieBoundError,
    exit_code_for,
    handle_error,
)
from src.utils.performance import performance_monitor


def setup_logging(level: str = "WARNING") -> None:
    """Set up logging on stderr so stdout carries only results."""
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """Run one command and return its exit code."""
    out = out or sys.stdout
    logger = logging.getLogger(__name__)
    # Flags only; the CLI ignores MIEBOUND_* variables and .env files.
    use_settings(CliSettings())
    setup_logging()

    try:
        args = build_parser().parse_args(argv)
        settings = use_settings(
            CliSettings(
                log_level=args.log_level,
                max_workers=max(getattr(args, "workers", 1), 1),
            )
        )
        setup_logging(settings.log_level)
        logger.info(f"Starting {settings.app_name} v{settings.app_version}")
        args.handler(args, out)
        return EXIT_OK
    except MieBoundError as e:
        logger.debug(f"{type(e).__name__}: {e.technical_message}")
        print(f"miebound: error: {e.technical_message}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        context = {"argv": argv if argv is not None else sys.argv[1:]}
        message = handle_error(e, context)
        print(f"miebound: error: {message}", file=sys.stderr)
        return exit_code_for(e)
    finally:
        logger.debug(f"Performance: {performance_monitor.get_summary()}")


def main_entry() -> None:
    """Console-script wrapper."""
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
