"""
Configuration module for the Floer persistence toolkit.

This module loads ambient settings from environment variables.
It uses python-dotenv to load a .env file for local development.
It also provides a centralized logger and validates the settings
upon import. None of these settings changes a computed result.
"""
import os
import logging
from typing import Optional
# Attempt to load .env file for local development.
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    # Production installs only requirements.txt; plain environment variables still apply.
    pass

# --- Logging Settings ---
LOG_LEVEL: str = os.getenv('LOG_LEVEL', 'INFO').upper()

# --- Report Archive ---
ARCHIVE_PATH: Optional[str] = os.getenv('ARCHIVE_PATH') or None

# --- Computation Defaults ---
WINDOW_START: str = os.getenv('WINDOW_START', '0')
REDUCIBLE_SEARCH_LIMIT: str = os.getenv('REDUCIBLE_SEARCH_LIMIT', '10')
ALEXANDER_SEARCH_BOUND: str = os.getenv('ALEXANDER_SEARCH_BOUND', '50')

# --- Logging Initialization ---
# basicConfig writes to stderr, so stdout carries only reports.
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _as_int(name: str, value: str, minimum: Optional[int] = None) -> Optional[str]:
    try:
        parsed = int(value)
    except ValueError:
        return f"{name}={value!r} is not an integer"
    if minimum is not None and parsed < minimum:
        return f"{name}={parsed} is below {minimum}"
    return None


# --- Configuration Validation ---
def validate_config() -> None:
    """
    Validates the ambient settings read from the environment.

    Raises:
        SystemExit: If any setting is malformed.
    """
    problems = [
        problem for problem in (
            _as_int('WINDOW_START', WINDOW_START),
            _as_int('REDUCIBLE_SEARCH_LIMIT', REDUCIBLE_SEARCH_LIMIT, minimum=0),
            _as_int('ALEXANDER_SEARCH_BOUND', ALEXANDER_SEARCH_BOUND, minimum=0),
        ) if problem
    ]
    if not isinstance(logging.getLevelName(LOG_LEVEL), int):
        problems.append(f"LOG_LEVEL={LOG_LEVEL!r} is not a logging level")

    if problems:
        logger.critical(
            f"CRITICAL ERROR: Invalid configuration: {'; '.join(problems)}. "
            "Please check your .env file or environment settings."
        )
        exit(1)

    logger.debug("Configuration successfully loaded and validated.")


def window_start() -> int:
    return int(WINDOW_START)


def reducible_search_limit() -> int:
    return int(REDUCIBLE_SEARCH_LIMIT)


def alexander_search_bound() -> int:
    return int(ALEXANDER_SEARCH_BOUND)


# Perform validation when the module is imported.
validate_config()
