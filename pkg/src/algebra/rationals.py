"""
Exact rationals extended by ±∞, and the "p/q" text codec.

Chern–Simons values such as 1/120 are compared at critical values, so
floats never enter: everything is a fractions.Fraction, and infinite
deaths and invariants are ExtendedRational.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Union

from src.errors import ValidationError

RationalLike = Union[int, Fraction]

_RATIONAL_RE = re.compile(r'^\s*(-?\d+)\s*/\s*(\d+)\s*$')


def parse_rational(text: str, *, strict: bool = True) -> Fraction:
    """
    Parses a "p/q" string into a Fraction.

    Args:
        text: The serialized rational.
        strict: When True, q must be positive and the fraction in lowest terms.
            When False, plain integers are accepted as well.

    Returns:
        The exact value.

    Raises:
        ValidationError: If the text is not a rational in the expected form.
    """
    if not isinstance(text, str):
        raise ValidationError(f"expected a rational string 'p/q', got {text!r}")
    match = _RATIONAL_RE.match(text)
    if not match:
        if not strict:
            try:
                return Fraction(int(text.strip()))
            except ValueError:
                pass
        raise ValidationError(f"expected a rational 'p/q', got {text!r}")
    numerator, denominator = int(match.group(1)), int(match.group(2))
    if denominator == 0:
        raise ValidationError(f"zero denominator in {text!r}")
    value = Fraction(numerator, denominator)
    if strict and (value.numerator, value.denominator) != (numerator, denominator):
        raise ValidationError(f"rational {text!r} is not in lowest terms")
    return value


def format_rational(value: RationalLike) -> str:
    """Formats a rational as "p/q", integers included ("2/1")."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@total_ordering
@dataclass(frozen=True)
class ExtendedRational:
    """
    An exact rational or ±∞.

    `value` is None exactly when the number is infinite; `sign` then tells
    which infinity.
    """
    value: Optional[Fraction]
    sign: int = 0

    @classmethod
    def of(cls, value: RationalLike) -> "ExtendedRational":
        return cls(Fraction(value))

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def _key(self):
        if self.value is None:
            return (self.sign, Fraction(0))
        return (0, self.value)

    @staticmethod
    def _coerce(other) -> "ExtendedRational":
        if isinstance(other, ExtendedRational):
            return other
        if isinstance(other, (int, Fraction)):
            return ExtendedRational(Fraction(other))
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __add__(self, other: RationalLike) -> "ExtendedRational":
        if isinstance(other, ExtendedRational):
            if not other.is_finite:
                if not self.is_finite and self.sign != other.sign:
                    raise ValidationError("∞ − ∞ is undefined")
                return other
            other = other.value
        if not self.is_finite:
            return self
        return ExtendedRational(self.value + Fraction(other))

    __radd__ = __add__

    def __sub__(self, other: RationalLike) -> "ExtendedRational":
        return self + (-Fraction(other))

    def __neg__(self) -> "ExtendedRational":
        if not self.is_finite:
            return ExtendedRational(None, -self.sign)
        return ExtendedRational(-self.value)

    def to_json(self) -> str:
        if self.value is None:
            return "inf" if self.sign > 0 else "-inf"
        return format_rational(self.value)

    @classmethod
    def from_json(cls, text: str) -> "ExtendedRational":
        if text in ("inf", "∞"):
            return INF
        if text in ("-inf", "-∞"):
            return NEG_INF
        return cls(parse_rational(text))

    def __str__(self) -> str:
        if self.value is None:
            return "∞" if self.sign > 0 else "−∞"
        return format_rational(self.value)


INF = ExtendedRational(None, 1)
NEG_INF = ExtendedRational(None, -1)
