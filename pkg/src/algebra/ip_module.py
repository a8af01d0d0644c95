"""
Instanton persistence modules (IP-modules) and their κ and ℓ invariants.

An IPModule is given by its barcode over one fundamental window; the
(grading +8, filtration +1) isomorphism is the bar-shift rule. Morphisms
are described only by metadata: degree D, level L = levelBase − η with a
symbolic slack η, and injectivity flags. Inequalities between ℓ values
are produced from that metadata.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from src.algebra.persistence import PERIOD, Barcode
from src.algebra.rationals import INF, ExtendedRational, RationalLike, format_rational
from src.errors import HypothesisError, ValidationError

logger = logging.getLogger(__name__)


# --- Modules and Invariants ---

@dataclass(frozen=True)
class IPModule:
    barcode: Barcode

    @property
    def window(self) -> range:
        return range(self.barcode.window_start, self.barcode.window_start + PERIOD)

    def rank(self, r: RationalLike, d: int) -> int:
        """dim F_r A_d."""
        return self.barcode.dimension(r, d)

    def unfiltered_rank(self, d: int) -> int:
        """dim A_d: the number of infinite bars in degree d."""
        return sum(1 for bar in self.barcode.bars_in(d) if bar.is_infinite)

    def is_zero(self) -> bool:
        return all(self.unfiltered_rank(d) == 0 for d in self.window)


def kappa(a: IPModule, d: int) -> ExtendedRational:
    """Least birth among infinite bars in degree d; ∞ when A_d = 0."""
    births = [bar.birth for bar in a.barcode.bars_in(d) if bar.is_infinite]
    if not births:
        return INF
    return ExtendedRational.of(min(births))


def kappa_table(a: IPModule, window: Optional[Sequence[int]] = None) -> Dict[int, ExtendedRational]:
    return {d: kappa(a, d) for d in (window if window is not None else a.window)}


def ell(a: IPModule) -> ExtendedRational:
    """
    inf over d of κ(d) − d/8.

    κ(d) − d/8 is 8-periodic, so the minimum over one window is exact.
    """
    return min(kappa(a, d) - Fraction(d, PERIOD) for d in a.window)


def ell_minimisers(a: IPModule) -> List[int]:
    value = ell(a)
    if not value.is_finite:
        return []
    return [d for d in a.window if kappa(a, d) - Fraction(d, PERIOD) == value]


# --- Morphism Metadata ---

@dataclass(frozen=True)
class Slack:
    """
    A symbolic nonnegative quantity η = η₁ + … + ηₖ.

    The empty sum is exact zero. `strict` records the constraint η > 0;
    otherwise only η ≥ 0 is known.
    """
    symbols: Tuple[str, ...] = ()
    strict: bool = False

    def __post_init__(self):
        if self.strict and not self.symbols:
            raise ValidationError("zero slack cannot be strictly positive")

    @classmethod
    def zero(cls) -> "Slack":
        return cls()

    @classmethod
    def named(cls, symbol: str, strict: bool) -> "Slack":
        return cls((symbol,), strict)

    def __add__(self, other: "Slack") -> "Slack":
        return Slack(self.symbols + other.symbols, self.strict or other.strict)

    @property
    def is_zero(self) -> bool:
        return not self.symbols

    def __str__(self) -> str:
        if not self.symbols:
            return "0"
        if len(self.symbols) == 1:
            return self.symbols[0]
        return "(" + " + ".join(self.symbols) + ")"

    def constraint(self) -> str:
        if not self.symbols:
            return "η = 0"
        return f"{self} {'>' if self.strict else '≥'} 0"


def _offset_text(constant: Fraction, slack: Slack) -> str:
    parts = []
    if constant != 0 or slack.is_zero:
        parts.append(("− " if constant < 0 else "+ ") + format_rational(abs(constant)))
    if not slack.is_zero:
        parts.append(f"− {slack}")
    return " ".join(parts)


@dataclass(frozen=True)
class IPMorphismMeta:
    """
    Degree D, level L = level_base − slack, and injectivity on F_∞.

    `injective_degrees` lists source degrees (mod 8) where f_∞ is known
    injective when injectivity does not hold in all degrees.
    """
    degree: int
    level_base: Fraction
    slack: Slack = field(default_factory=Slack)
    injective_all_degrees: bool = False
    injective_degrees: Optional[FrozenSet[int]] = None

    @property
    def offset(self) -> Fraction:
        """The constant part of L − D/8."""
        return Fraction(self.level_base) - Fraction(self.degree, PERIOD)

    def is_injective_in(self, d: int) -> bool:
        if self.injective_all_degrees:
            return True
        return self.injective_degrees is not None and d % PERIOD in self.injective_degrees

    def level_text(self) -> str:
        base = format_rational(self.level_base)
        if self.slack.is_zero:
            return base
        if self.level_base == 0:
            return f"−{self.slack}"
        return f"{base} − {self.slack}"

    def __str__(self) -> str:
        return f"(D={self.degree}, L={self.level_text()})"


def compose(f: IPMorphismMeta, g: IPMorphismMeta) -> IPMorphismMeta:
    """
    Metadata of g∘f: degrees, level bases and slacks add.

    g∘f is injective in degree d when f is injective in d and g in d + D_f.
    """
    injective_all = f.injective_all_degrees and g.injective_all_degrees
    injective_degrees = None
    if not injective_all and (f.injective_degrees is not None or g.injective_degrees is not None
                              or f.injective_all_degrees or g.injective_all_degrees):
        injective_degrees = frozenset(
            d for d in range(PERIOD) if f.is_injective_in(d) and g.is_injective_in(d + f.degree)
        )
    return IPMorphismMeta(
        degree=f.degree + g.degree,
        level_base=Fraction(f.level_base) + Fraction(g.level_base),
        slack=f.slack + g.slack,
        injective_all_degrees=injective_all,
        injective_degrees=injective_degrees,
    )


# --- Inequalities ---

@dataclass(frozen=True)
class BoundTerm:
    offset: Fraction
    slack: Slack


@dataclass(frozen=True)
class EllInequality:
    """
    ℓ(target) ≤ ℓ(source) + max over terms of (offset − slack).

    `strict` means the weakened statement ℓ(target) < ℓ(source) + constant
    holds, where constant is the largest offset.
    """
    target: str
    source: str
    terms: Tuple[BoundTerm, ...]
    strict: bool
    source_value: Optional[ExtendedRational] = None

    @property
    def constant(self) -> Fraction:
        return max(term.offset for term in self.terms)

    @property
    def relation(self) -> str:
        return "<" if self.strict else "≤"

    @property
    def bound(self) -> Optional[ExtendedRational]:
        """ℓ(source) + constant when ℓ(source) is known."""
        if self.source_value is None:
            return None
        return self.source_value + self.constant

    def exact_text(self) -> str:
        pieces = [f"{format_rational(t.offset)} − {t.slack}" if not t.slack.is_zero else format_rational(t.offset)
                  for t in self.terms]
        if len(pieces) == 1:
            return f"ℓ({self.target}) ≤ ℓ({self.source}) {_offset_text(self.terms[0].offset, self.terms[0].slack)}"
        return f"ℓ({self.target}) ≤ ℓ({self.source}) + max({', '.join(pieces)})"

    def __str__(self) -> str:
        constant = self.constant
        if constant == 0:
            return f"ℓ({self.target}) {self.relation} ℓ({self.source})"
        sign = "−" if constant < 0 else "+"
        return f"ℓ({self.target}) {self.relation} ℓ({self.source}) {sign} {format_rational(abs(constant))}"


def _source_finite(source: Union[IPModule, ExtendedRational, None], finite: Optional[bool]) -> Tuple[bool, Optional[ExtendedRational]]:
    if isinstance(source, IPModule):
        value = ell(source)
        return value.is_finite, value
    if isinstance(source, ExtendedRational):
        return source.is_finite, source
    return bool(finite), None


def ell_bound_single(f: IPMorphismMeta, source: Union[IPModule, ExtendedRational, None] = None, *,
                     finite: Optional[bool] = None, target_label: str = "B",
                     source_label: str = "A") -> EllInequality:
    """
    ℓ(B) ≤ ℓ(A) + (L − D/8) for f: A → B injective on F_∞ in all degrees.

    The bound is strict when the slack is strictly positive and ℓ(A) is finite.
    ℓ(A) finiteness comes from `source` when given, else from `finite`.

    Raises:
        HypothesisError: If f is not declared injective in all degrees.
    """
    if not f.injective_all_degrees:
        raise HypothesisError(f"morphism {source_label} → {target_label} is not declared injective in all degrees")
    is_finite, value = _source_finite(source, finite)
    return EllInequality(
        target=target_label,
        source=source_label,
        terms=(BoundTerm(f.offset, f.slack),),
        strict=f.slack.strict and is_finite,
        source_value=value,
    )


def ell_bound_pair(f1: IPMorphismMeta, f2: IPMorphismMeta, source: Union[IPModule, ExtendedRational, None] = None, *,
                   jointly_injective: bool, finite: Optional[bool] = None, target_label: str = "B",
                   source_label: str = "A") -> EllInequality:
    """
    ℓ(B) ≤ ℓ(A) + max(L₁ − D₁/8, L₂ − D₂/8) when (f¹_∞, f²_∞) is jointly injective.

    Strict when every term attaining the largest constant offset has strictly
    positive slack and ℓ(A) is finite.

    Raises:
        HypothesisError: If joint injectivity is not declared.
    """
    if not jointly_injective:
        raise HypothesisError(f"pair {source_label} → {target_label} is not declared jointly injective")
    is_finite, value = _source_finite(source, finite)
    terms = (BoundTerm(f1.offset, f1.slack), BoundTerm(f2.offset, f2.slack))
    constant = max(t.offset for t in terms)
    strict = is_finite and all(t.slack.strict for t in terms if t.offset == constant)
    return EllInequality(target_label, source_label, terms, strict, value)


def kappa_bound(a: IPModule, f: IPMorphismMeta, d: int) -> Tuple[int, ExtendedRational, Slack]:
    """
    κ_B(d + D) ≤ κ_A(d) + L for f injective on F_∞ in degree d.

    Returns:
        The target degree, the constant part κ_A(d) + levelBase, and the slack
        to subtract from it.

    Raises:
        HypothesisError: If f is not injective in degree d.
    """
    if not f.is_injective_in(d):
        raise HypothesisError(f"morphism is not declared injective in degree {d}")
    return d + f.degree, kappa(a, d) + Fraction(f.level_base), f.slack
