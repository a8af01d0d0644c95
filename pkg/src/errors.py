"""
Exception hierarchy shared by the library and the command-line front end.

ValidationError means the input itself is malformed or inconsistent.
VerificationError means the input is well formed but a checked property
does not hold. The CLI middleware maps them to exit codes 1 and 2.
"""
from typing import Optional, Tuple


class AlgebraError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(AlgebraError, ValueError):
    """Malformed or inconsistent input.

    Attributes:
        subject: Optional tag naming the offending entry, e.g. ("pair", x, y),
            so loaders can point at it in the source text.
    """

    def __init__(self, message: str, subject: Optional[Tuple[str, ...]] = None):
        self.subject = subject
        super().__init__(message)


class ManifestError(ValidationError):
    """A data file failed to parse or validate.

    Attributes:
        line: 1-based line of the offending entry when it could be located.
    """

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        location = ""
        if source:
            location = f"{source}"
            if line is not None:
                location += f":{line}"
            location += ": "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class VerificationError(AlgebraError):
    """A checked identity, exactness or isomorphism property fails."""


class HypothesisError(VerificationError):
    """An inequality was requested for a morphism lacking the required injectivity."""
