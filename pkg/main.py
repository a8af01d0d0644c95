import argparse
import asyncio
import sys
from typing import List, Optional

# Important: import and validate the configuration first
from src.config import logger, validate_config
validate_config()

from src.cli.middleware import (
    apply_middlewares, archive_middleware, error_handling_middleware, logging_middleware, window_middleware,
)
from src.cli.reports import EXIT_VALIDATION
from src.cli.routes import setup_routes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='floer-persistence',
        description="Filtered instanton homology at the algebraic level: IP-modules, triangles, "
                    "cobordism arithmetic, ℓ-inequality certificates and Alexander constraints.",
    )
    setup_routes(parser)
    return parser


async def main(argv: Optional[List[str]] = None) -> int:
    """Parses the command line, runs the handler through the middleware chain and prints the report."""
    args = build_parser().parse_args(argv)
    handler = apply_middlewares(args.handler, [
        logging_middleware,
        error_handling_middleware,
        window_middleware,
        archive_middleware,
    ])
    report = await handler(args)
    print(report.render(args.json))
    return report.exit_code


if __name__ == '__main__':
    try:
        code = asyncio.run(main())
    except KeyboardInterrupt:
        logger.info("Interrupted.")
        code = EXIT_VALIDATION
    except Exception as e:
        logger.exception(f"Unexpected error in the main loop: {e}")
        code = EXIT_VALIDATION
    sys.exit(code)
