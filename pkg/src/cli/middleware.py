"""
Middleware for the command-line front end.

Each middleware wraps a handler the way request middleware wraps a web
handler: it receives the parsed arguments and the next handler, and
returns a RunReport. Error handling turns exceptions into failure reports
with the documented exit codes.
"""
import argparse
import logging
from functools import partial
from typing import Awaitable, Callable, Sequence

from src import archive, config
from src.cli.handlers import window_from_text
from src.cli.reports import EXIT_VALIDATION, EXIT_VERIFICATION, RunReport
from src.errors import ValidationError, VerificationError

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], Awaitable[RunReport]]
Middleware = Callable[[argparse.Namespace, Handler], Awaitable[RunReport]]


async def logging_middleware(args: argparse.Namespace, handler: Handler) -> RunReport:
    """Logs each command and its outcome."""
    logger.info(f"Command: {args.command}")
    report = await handler(args)
    logger.info(f"Command {args.command} finished with exit code {report.exit_code}")
    return report


async def error_handling_middleware(args: argparse.Namespace, handler: Handler) -> RunReport:
    """
    Maps ValidationError to exit code 1 and VerificationError to exit code 2.

    Anything else is logged with its traceback and reported as a validation
    failure, so no traceback reaches stdout.
    """
    try:
        return await handler(args)
    except ValidationError as e:
        logger.error(f"Invalid input for {args.command}: {e}")
        return RunReport.failure(args.command, str(e), EXIT_VALIDATION)
    except VerificationError as e:
        logger.error(f"Verification failed for {args.command}: {e}")
        return RunReport.failure(args.command, str(e), EXIT_VERIFICATION)
    except Exception as e:
        logger.exception(f"Unhandled exception in {args.command}: {e}")
        return RunReport.failure(args.command, f"internal error: {e}", EXIT_VALIDATION)


async def archive_middleware(args: argparse.Namespace, handler: Handler) -> RunReport:
    """Stores successful reports when an archive is configured."""
    report = await handler(args)
    path = getattr(args, 'archive', None) or config.ARCHIVE_PATH
    if path and report.ok and args.command != 'history':
        try:
            await archive.save_report(path, args.command, report.as_dict())
        except Exception as e:
            logger.error(f"Could not archive the {args.command} report in {path}: {e}")
    return report


def apply_middlewares(handler: Handler, middlewares: Sequence[Middleware]) -> Handler:
    """The first middleware in the list runs outermost."""
    for middleware in reversed(middlewares):
        handler = partial(middleware, handler=handler)
    return handler


async def window_middleware(args: argparse.Namespace, handler: Handler) -> RunReport:
    """Resolves `--window a..b` into args.window_start before the handler runs."""
    args.window_start = window_from_text(getattr(args, 'window', None))
    return await handler(args)
