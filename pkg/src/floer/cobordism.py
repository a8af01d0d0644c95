"""
Index, energy, degree and level arithmetic for cobordisms.

Every quantity is exact. The energy enters index formulas as the single
aggregate e8 = 8·E, and the correction ρ vanishes for the S³ and ℝP³
ends this module knows about.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.algebra.ip_module import IPMorphismMeta, Slack
from src.algebra.rationals import RationalLike, format_rational
from src.errors import ValidationError

logger = logging.getLogger(__name__)


class MiddleEnd(Enum):
    S3 = "S3"
    RP3 = "RP3"


class FlatLimitType(Enum):
    CENTRAL = "central"
    ABELIAN = "abelian"
    IRREDUCIBLE = "irreducible"

    @property
    def h0(self) -> int:
        """Dimension of the stabilizer: 3, 1 or 0."""
        return {"central": 3, "abelian": 1, "irreducible": 0}[self.value]


@dataclass(frozen=True)
class CobordismTopology:
    """
    Homological data of a cobordism W with bundle class c.

    family_dim is the dimension of the metric family (0 for one metric).
    """
    b1: int = 0
    bplus: int = 0
    c_squared: Fraction = Fraction(0)
    simply_connected: bool = True
    family_dim: int = 0
    middle_ends: Tuple[MiddleEnd, ...] = ()
    name: str = "W"

    def __post_init__(self):
        if self.b1 != 0:
            raise ValidationError(f"b₁ = {self.b1}: the index formulas used here assume b₁ = 0")
        if self.bplus < 0 or self.family_dim < 0:
            raise ValidationError("b⁺ and the family dimension must be nonnegative")


# --- Degree and Level ---

def degree_level(t: CobordismTopology, slack_symbol: Optional[str] = None) -> IPMorphismMeta:
    """
    D = dim G − 2c², L = −c²/4 − η, with η > 0 exactly when W is simply connected.

    Injectivity is never inferred; the returned metadata carries none.

    Raises:
        ValidationError: If b⁺ ≠ 0, or D is not an integer.
    """
    if t.bplus != 0:
        raise ValidationError(f"degree and level need a negative definite cobordism, got b⁺ = {t.bplus}")
    degree = t.family_dim - 2 * Fraction(t.c_squared)
    if degree.denominator != 1:
        raise ValidationError(f"degree dim G − 2c² = {format_rational(degree)} is not an integer; check c²")
    symbol = slack_symbol or f"η({t.name})"
    return IPMorphismMeta(
        degree=int(degree),
        level_base=-Fraction(t.c_squared) / 4,
        slack=Slack.named(symbol, strict=t.simply_connected),
    )


def energy_relation(c_squared: RationalLike, cs_from: RationalLike, cs_to: RationalLike) -> Fraction:
    """Topological energy E = −c²/4 + cs(α) − cs(α′)."""
    return -Fraction(c_squared) / 4 + Fraction(cs_from) - Fraction(cs_to)


def index_additivity(i_alpha: int, c_squared: RationalLike, i_alpha_prime: int) -> int:
    """
    i(α) + 3 + i(W, c; θ, θ′) − i(α′) with i(W, c; θ, θ′) = −2c² − 3.

    Raises:
        ValidationError: If −2c² is not an integer.
    """
    shift = -2 * Fraction(c_squared)
    if shift.denominator != 1:
        raise ValidationError(f"−2c² = {format_rational(shift)} is not an integer")
    return i_alpha + 3 + (int(shift) - 3) - i_alpha_prime


def asd_index(e8: RationalLike, bplus: int, ends: Sequence[FlatLimitType]) -> Fraction:
    """i(A_W) = 8E − 3(1 + b⁺) + ½ Σ (3 − h⁰) over the flat limits."""
    return Fraction(e8) - 3 * (1 + bplus) + Fraction(sum(3 - end.h0 for end in ends), 2)


# --- Reducibles on N ---

@dataclass(frozen=True)
class ReducibleInstanton:
    n: int
    e8: Fraction
    index: Fraction


def reducibles_on_N(c_self_intersection: RationalLike = Fraction(-1, 2), n_max: int = 10,
                    n_min: int = 1) -> List[ReducibleInstanton]:
    """
    The reducible solutions {n ĉ, (1−n) ĉ}, n_min ≤ n ≤ n_max.

    e8(n) = (2n−1)²·(−2ĉ²), so e8(1) = 1 when ĉ² = −1/2; the flat limits are
    two central ones and one abelian one.
    """
    scale = -2 * Fraction(c_self_intersection)
    ends = (FlatLimitType.CENTRAL, FlatLimitType.CENTRAL, FlatLimitType.ABELIAN)
    found = []
    for n in range(max(n_min, 1), n_max + 1):
        e8 = (2 * n - 1) ** 2 * scale
        found.append(ReducibleInstanton(n, e8, asd_index(e8, 0, ends)))
    return found


def minimal_reducible(reducibles: Sequence[ReducibleInstanton]) -> Optional[ReducibleInstanton]:
    """The unique reducible of least index, or None if the list is empty or the minimum is shared."""
    if not reducibles:
        return None
    least = min(r.index for r in reducibles)
    winners = [r for r in reducibles if r.index == least]
    return winners[0] if len(winners) == 1 else None


# --- Broken Index Bounds ---

@dataclass(frozen=True)
class IndexBound:
    scenario: str
    components: Tuple[int, ...]

    @property
    def bound(self) -> int:
        return sum(self.components)

    def __str__(self) -> str:
        terms = " + ".join(f"({c})" if c < 0 else str(c) for c in self.components)
        return f"i(A) ≥ {terms} = {self.bound}"


def _irreducible_pieces(gap: int = 2, **_) -> Tuple[int, ...]:
    # two index ≥ 1 pieces, minus the dimension of the family G^i_j
    if gap < 1:
        raise ValidationError(f"family gap i − j must be at least 1, got {gap}")
    return (1, 1, -(gap - 1))


def _reducible_unbroken(bplus: Optional[int] = None, **_) -> Tuple[int, ...]:
    if bplus == 0:
        return (-3,)
    return (-4,)


def _neck_z_both(**_) -> Tuple[int, ...]:
    return (1, 3, -4, 3, -4, 3, 1)


def _neck_z_one(**_) -> Tuple[int, ...]:
    return (1, 3, -4, 3, 0)


def _neck_z_limit(**_) -> Tuple[int, ...]:
    return (0, 0, 1)


def _neck_z(**kwargs) -> Tuple[int, ...]:
    cases = [_neck_z_limit(**kwargs), _neck_z_one(**kwargs), _neck_z_both(**kwargs)]
    return min(cases, key=sum)


SCENARIOS: Dict[str, Callable[..., Tuple[int, ...]]] = {
    'irreducible-pieces-reducible-limit': _irreducible_pieces,
    'reducible-unbroken': _reducible_unbroken,
    'reducible-core-broken': lambda **_: (1, 3, -4, 3, 1),
    'neck-z-reducible-limit': _neck_z_limit,
    'neck-z-one-reducible': _neck_z_one,
    'neck-z-both-reducible': _neck_z_both,
    'neck-z': _neck_z,
    'neck-rp3': lambda **_: (0, -1, 1),
    'neck-s3': lambda **_: (0, -1, 3),
    'pentagon-interior': lambda **_: (-2,),
    'pentagon-s3-face': lambda **_: (-1, -1, 3),
    'pentagon-z-face': lambda **_: (-1, 0),
    'pentagon-rp3-face': lambda **_: (-1, -1, 1),
    'pentagon-s2xs1-face': lambda **_: (-1, -2, 1, 1),
}


def broken_index_bound(scenario: str, **params) -> IndexBound:
    """
    Lower bound on the index of a (possibly broken) instanton in a named
    breaking pattern, as the sum of its component bounds.

    Raises:
        ValidationError: For an unknown scenario.
    """
    try:
        rule = SCENARIOS[scenario]
    except KeyError:
        raise ValidationError(
            f"unknown scenario {scenario!r}; expected one of {', '.join(sorted(SCENARIOS))}"
        ) from None
    return IndexBound(scenario, tuple(rule(**params)))
