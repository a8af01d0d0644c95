"""
Laurent polynomials with integer coefficients and the Alexander-polynomial
constraints for a cosmetic surgery pair on a genus two knot.

The pipeline imposes three conditions on Δ(t) = a(t² + t⁻²) + b(t + t⁻¹) + c:
    Δ″(1) = 0, |Δ(1)| = 1, and Δ̃″(1) = 0 for the branched double cover
    polynomial Δ̃(t) = Δ(t^{1/2})·Δ(−t^{1/2}).
The conditions are solved symbolically with sympy and cross-checked by a
vectorized search over a box of integer triples.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import sympy as sp

from src.errors import ValidationError

logger = logging.getLogger(__name__)

T = sp.Symbol('t', positive=True)
A, B, C = sp.symbols('a b c', integer=True)


@dataclass(frozen=True)
class LaurentPoly:
    """Σ c_k t^k, stored as sorted (k, c_k) pairs with no zero coefficients."""
    terms: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, coefficients: Mapping[int, int]) -> "LaurentPoly":
        return cls(tuple(sorted((int(k), int(c)) for k, c in coefficients.items() if c != 0)))

    @classmethod
    def constant(cls, value: int) -> "LaurentPoly":
        return cls.from_dict({0: value})

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "LaurentPoly":
        try:
            return cls.from_dict({int(k): int(v) for k, v in data.items()})
        except (TypeError, ValueError, AttributeError) as e:
            raise ValidationError(f"a polynomial is an object mapping integer exponents to integers: {e}") from e

    @classmethod
    def from_sympy(cls, expr: sp.Expr, t: sp.Symbol = T) -> "LaurentPoly":
        """Reads an expanded Laurent polynomial in t with integer coefficients."""
        coefficients: Dict[int, int] = {}
        for term in sp.Add.make_args(sp.expand(expr)):
            coeff, power = term.as_coeff_exponent(t)
            if coeff.has(t) or not power.is_integer or not coeff.is_integer:
                raise ValidationError(f"term {term} is not an integer multiple of an integer power of {t}")
            coefficients[int(power)] = coefficients.get(int(power), 0) + int(coeff)
        return cls.from_dict(coefficients)

    def to_sympy(self, t: sp.Symbol = T) -> sp.Expr:
        return sp.Add(*(sp.Integer(c) * t ** k for k, c in self.terms))

    def to_json(self) -> Dict[str, int]:
        return {str(k): c for k, c in self.terms}

    def as_dict(self) -> Dict[int, int]:
        return dict(self.terms)

    def coefficient(self, k: int) -> int:
        return self.as_dict().get(k, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_symmetric(self) -> bool:
        """p(t) = p(t⁻¹)."""
        coefficients = self.as_dict()
        return all(coefficients.get(-k, 0) == c for k, c in self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        total = self.as_dict()
        for k, c in other.terms:
            total[k] = total.get(k, 0) + c
        return LaurentPoly.from_dict(total)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return multiply(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for k, c in sorted(self.terms, reverse=True):
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                power = "t" if k == 1 else f"t^{k}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append(("- " if c < 0 else "+ ") + body)
        return " ".join(pieces)


# --- Arithmetic ---

def multiply(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    product: Dict[int, int] = {}
    for j, a in p.terms:
        for k, b in q.terms:
            product[j + k] = product.get(j + k, 0) + a * b
    return LaurentPoly.from_dict(product)


def evaluate(p: LaurentPoly, t: Union[int, Fraction]) -> Fraction:
    if t == 0 and any(k < 0 for k, _ in p.terms):
        raise ValidationError("cannot evaluate a polynomial with negative powers at 0")
    value = Fraction(t)
    return sum((c * value ** k for k, c in p.terms), Fraction(0))


def derivative(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly.from_dict({k - 1: k * c for k, c in p.terms})


def second_derivative_at_one(p: LaurentPoly) -> int:
    """Σ c_k·k·(k − 1)."""
    return sum(c * k * (k - 1) for k, c in p.terms)


def determinant(p: LaurentPoly) -> int:
    """|p(−1)|."""
    return abs(int(evaluate(p, -1)))


def branched_cover_poly(p: LaurentPoly) -> LaurentPoly:
    """
    p(t^{1/2})·p(−t^{1/2}) rewritten in integer powers of t.

    Raises:
        ValidationError: If p is not symmetric.
    """
    if not p.is_symmetric():
        raise ValidationError(f"branched cover polynomial needs a symmetric polynomial, got {p}")
    # in s = t^{1/2}: p(s)·p(−s), an even function of s
    reflected = LaurentPoly(tuple((k, c if k % 2 == 0 else -c) for k, c in p.terms))
    product = multiply(p, reflected)
    odd = [k for k, _ in product.terms if k % 2]
    if odd:
        raise ValidationError(f"odd powers of t^(1/2) survived in the cover product: {odd}")
    return LaurentPoly(tuple((k // 2, c) for k, c in product.terms))


# --- Genus Two Template ---

@dataclass(frozen=True)
class GenusTwoSymmetric:
    """a t² + b t + c + b t⁻¹ + a t⁻²."""
    a: int
    b: int
    c: int

    def to_laurent(self) -> LaurentPoly:
        return LaurentPoly.from_dict({2: self.a, 1: self.b, 0: self.c, -1: self.b, -2: self.a})

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)


def _template(t: sp.Symbol = T) -> sp.Expr:
    return A * (t ** 2 + t ** -2) + B * (t + t ** -1) + C


def _second_derivative_at_one(expr: sp.Expr, t: sp.Symbol = T) -> sp.Expr:
    return sp.expand(sp.diff(expr, t, 2).subs(t, 1))


def _cover_template(t: sp.Symbol = T) -> sp.Expr:
    root = sp.sqrt(t)
    delta = _template()
    return sp.expand(delta.subs(T, root) * delta.subs(T, -root))


def constraint_expressions() -> Dict[str, sp.Expr]:
    """
    The three cosmetic constraints as expressions in a, b, c:
    'second_derivative' = Δ″(1), 'value_at_one' = Δ(1), 'cover' = Δ̃″(1).
    """
    delta = _template()
    return {
        'second_derivative': _second_derivative_at_one(delta),
        'value_at_one': sp.expand(delta.subs(T, 1)),
        'cover': _second_derivative_at_one(_cover_template()),
    }


@dataclass(frozen=True)
class CosmeticBranch:
    """Everything derived for one sign s in Δ(1) = s."""
    sign: int
    family: Dict[sp.Symbol, sp.Expr]
    cover_on_family: sp.Expr
    solutions: Tuple[Tuple[int, int, int], ...]


@dataclass(frozen=True)
class CosmeticSolution:
    constraints: Dict[str, sp.Expr]
    branches: Tuple[CosmeticBranch, ...]
    canonical: GenusTwoSymmetric

    @property
    def solutions(self) -> List[Tuple[int, int, int]]:
        return sorted({s for branch in self.branches for s in branch.solutions})

    @property
    def trivial_forced(self) -> bool:
        return self.canonical.to_laurent() == LaurentPoly.constant(1)

    @property
    def conclusion(self) -> str:
        return "Δ_K = 1 forced" if self.trivial_forced else f"Δ_K = {self.canonical.to_laurent()} not excluded"


def cosmetic_solve() -> CosmeticSolution:
    """
    Solves Δ″(1) = 0, Δ(1) = ±1 and Δ̃″(1) = 0 over the genus two template.

    Each sign of Δ(1) is kept as its own branch, with the one-parameter
    family left by the first two constraints and the cover constraint
    restricted to it. The canonical answer normalizes Δ(1) = +1.
    """
    constraints = constraint_expressions()
    branches = []
    for sign in (1, -1):
        family = sp.solve([constraints['second_derivative'], constraints['value_at_one'] - sign], [B, C], dict=True)[0]
        cover_on_family = sp.expand(constraints['cover'].subs(family))
        solved = sp.solve(
            [constraints['second_derivative'], constraints['value_at_one'] - sign, constraints['cover']],
            [A, B, C], dict=True,
        )
        solutions = tuple(sorted((int(s[A]), int(s[B]), int(s[C])) for s in solved))
        branches.append(CosmeticBranch(sign, family, cover_on_family, solutions))
        logger.debug(f"Δ(1) = {sign}: family {family}, cover constraint {cover_on_family}, solutions {solutions}")
    positive = next(b for b in branches if b.sign == 1)
    if len(positive.solutions) != 1:
        raise ValidationError(f"expected a unique normalized solution, found {positive.solutions}")
    return CosmeticSolution(constraints, tuple(branches), GenusTwoSymmetric(*positive.solutions[0]))


def exhaustive_search(bound: int = 50) -> List[Tuple[int, int, int]]:
    """Every integer (a, b, c) with |a|, |b|, |c| ≤ bound meeting the three constraints."""
    if bound < 0:
        raise ValidationError(f"search bound must be nonnegative, got {bound}")
    constraints = constraint_expressions()
    checks = {name: sp.lambdify((A, B, C), expr, modules='numpy') for name, expr in constraints.items()}
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    a, b, c = np.meshgrid(axis, axis, axis, indexing='ij')
    mask = (
        (checks['second_derivative'](a, b, c) == 0)
        & (np.abs(checks['value_at_one'](a, b, c)) == 1)
        & (checks['cover'](a, b, c) == 0)
    )
    hits = np.argwhere(mask) - bound
    logger.info(f"Searched {axis.size ** 3} triples with |a|,|b|,|c| ≤ {bound}: {len(hits)} solutions")
    return sorted(tuple(int(x) for x in row) for row in hits)


def double_cover_slope(slope: Union[int, Fraction]) -> int:
    """The ±2 surgery on K lifts to ±1 surgery on the preimage knot in the branched double cover."""
    if slope == 2:
        return 1
    if slope == -2:
        return -1
    raise ValidationError(f"only the slopes ±2 lift to integral surgery on the cover, got {slope}")


def parse_polynomial(data: Union[Mapping[str, int], str], *, symmetric: Optional[bool] = None) -> LaurentPoly:
    """Reads a polynomial from an exponent→coefficient object or a sympy expression in t."""
    if isinstance(data, str):
        try:
            expr = sp.sympify(data, locals={'t': T})
        except (sp.SympifyError, TypeError) as e:
            raise ValidationError(f"cannot read polynomial {data!r}: {e}") from e
        poly = LaurentPoly.from_sympy(expr)
    else:
        poly = LaurentPoly.from_json(data)
    if symmetric and not poly.is_symmetric():
        raise ValidationError(f"polynomial {poly} is not symmetric")
    return poly
