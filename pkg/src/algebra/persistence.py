"""
Filtered complexes, sublevel homology and barcodes.

A FilteredComplex stores one representative per generator. Its t-translates
(grading +8, cs +1) are implicit: a query in grading d materializes only the
finitely many translates that land in d, so every computation is finite.

Sublevel sets are closed (cs ≤ r), which makes ranks right-continuous at
critical values. Bars are half-open [birth, death).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.gf2_chain import BitMatrix, kernel, rank
from src.algebra.rationals import INF, ExtendedRational, RationalLike, format_rational
from src.errors import ValidationError

logger = logging.getLogger(__name__)

PERIOD = 8


# --- Filtered Complexes ---

@dataclass(frozen=True)
class FlatGenerator:
    label: str
    grading: int
    cs: Fraction


@dataclass(frozen=True)
class Translate:
    """The translate t^shift of a generator: grading + 8·shift, cs + shift."""
    generator: FlatGenerator
    shift: int

    @property
    def grading(self) -> int:
        return self.generator.grading + PERIOD * self.shift

    @property
    def cs(self) -> Fraction:
        return self.generator.cs + self.shift

    @property
    def sort_key(self) -> Tuple[Fraction, str, int]:
        return (self.cs, self.generator.label, self.shift)


@dataclass(frozen=True)
class FilteredComplex:
    """
    A strictly filtered complex over the two-element field with the
    (grading +8, cs +1) periodicity.

    Attributes:
        generators: Representatives, labels unique.
        boundary: Pairs (x, y) meaning y occurs in the boundary of x.
    """
    generators: Tuple[FlatGenerator, ...]
    boundary: FrozenSet[Tuple[str, str]] = field(default_factory=frozenset)

    @classmethod
    def create(cls, generators: Iterable[FlatGenerator],
               boundary: Iterable[Sequence[str]] = ()) -> "FilteredComplex":
        return cls(tuple(generators), frozenset((str(x), str(y)) for x, y in boundary))

    def __post_init__(self):
        by_label: Dict[str, FlatGenerator] = {}
        for generator in self.generators:
            if generator.label in by_label:
                raise ValidationError(f"duplicate generator label {generator.label!r}",
                                      subject=("duplicate", generator.label))
            by_label[generator.label] = generator
        for x, y in sorted(self.boundary):
            for label in (x, y):
                if label not in by_label:
                    raise ValidationError(f"boundary pair ({x!r}, {y!r}) names unknown generator {label!r}",
                                          subject=("pair", x, y))
            source, target = by_label[x], by_label[y]
            if target.grading != source.grading - 1:
                raise ValidationError(
                    f"boundary pair ({x!r}, {y!r}): grading must drop by 1, "
                    f"got {source.grading} → {target.grading}",
                    subject=("pair", x, y),
                )
            if not target.cs < source.cs:
                raise ValidationError(
                    f"boundary pair ({x!r}, {y!r}): filtration must strictly decrease, "
                    f"got cs {format_rational(source.cs)} → {format_rational(target.cs)}",
                    subject=("pair", x, y),
                )
        # d∘d counts two-step paths modulo 2
        outgoing: Dict[str, List[str]] = {}
        for x, y in self.boundary:
            outgoing.setdefault(x, []).append(y)
        for x in sorted(outgoing):
            parity: Dict[str, int] = {}
            for y in outgoing[x]:
                for z in outgoing.get(y, ()):
                    parity[z] = parity.get(z, 0) ^ 1
            odd = sorted(z for z, bit in parity.items() if bit)
            if odd:
                raise ValidationError(f"d∘d ≠ 0: boundary of boundary of {x!r} contains {odd[0]!r}",
                                      subject=("source", x))

    def generator(self, label: str) -> FlatGenerator:
        for g in self.generators:
            if g.label == label:
                return g
        raise KeyError(label)

    def translates(self, d: int, r: Optional[RationalLike] = None) -> List[Translate]:
        """Translates in grading d, optionally cut to the sublevel cs ≤ r, sorted by (cs, label)."""
        found = []
        for g in self.generators:
            shift, remainder = divmod(d - g.grading, PERIOD)
            if remainder:
                continue
            t = Translate(g, shift)
            if r is None or t.cs <= r:
                found.append(t)
        return sorted(found, key=lambda t: t.sort_key)

    def boundary_matrix(self, sources: Sequence[Translate], targets: Sequence[Translate]) -> BitMatrix:
        """Matrix of ∂ from the span of `sources` to the span of `targets` (rows = targets)."""
        index = {(t.generator.label, t.shift): i for i, t in enumerate(targets)}
        dense = np.zeros((len(targets), len(sources)), dtype=np.uint8)
        for j, s in enumerate(sources):
            for x, y in self.boundary:
                if x != s.generator.label:
                    continue
                i = index.get((y, s.shift))
                if i is not None:
                    dense[i, j] = 1
        return BitMatrix.from_dense(dense)


# --- Sublevel Homology ---

def sublevel_homology(c: FilteredComplex, r: RationalLike, d: int) -> int:
    """
    Dimension of F_r in grading d: homology of the subcomplex spanned by
    translates with cs ≤ r.
    """
    chains = c.translates(d, r)
    if not chains:
        return 0
    below = c.translates(d - 1, r)
    above = c.translates(d + 1, r)
    outgoing = rank(c.boundary_matrix(chains, below))
    incoming = rank(c.boundary_matrix(above, chains))
    return len(chains) - outgoing - incoming


def inclusion_rank(c: FilteredComplex, r: RationalLike, r2: RationalLike, d: int) -> int:
    """
    Rank of the map F_r → F_{r2} in grading d, computed from cycles and
    boundaries: dim Z(r) − dim(Z(r) ∩ B(r2)).
    """
    if r > r2:
        raise ValidationError(f"inclusion requested from {r} down to {r2}")
    chains = c.translates(d, r2)
    if not chains:
        return 0
    small = [i for i, t in enumerate(chains) if t.cs <= r]
    if not small:
        return 0
    small_chains = [chains[i] for i in small]
    cycles_small = kernel(c.boundary_matrix(small_chains, c.translates(d - 1, r)))
    # embed the cycles of F_r into the chains of F_{r2}
    embedded = np.zeros((len(chains), cycles_small.cols), dtype=np.uint8)
    embedded[small, :] = cycles_small.to_dense()
    boundaries = c.boundary_matrix(c.translates(d + 1, r2), chains)
    combined = BitMatrix.hstack(boundaries, BitMatrix.from_dense(embedded))
    return rank(combined) - rank(boundaries)


def critical_values(c: FilteredComplex, d: int) -> List[Fraction]:
    """Sorted cs values of translates in gradings d and d+1: the only places F_r in grading d can change."""
    return sorted({t.cs for t in c.translates(d)} | {t.cs for t in c.translates(d + 1)})


# --- Barcodes ---

@dataclass(frozen=True, order=True)
class Bar:
    degree: int
    birth: Fraction
    death: ExtendedRational = INF

    def contains(self, r: RationalLike) -> bool:
        return self.birth <= r and ExtendedRational.of(r) < self.death

    def shifted(self, k: int) -> "Bar":
        """The bar k periods up: degree + 8k, endpoints + k."""
        return Bar(self.degree + PERIOD * k, self.birth + k, self.death + k)

    @property
    def is_infinite(self) -> bool:
        return not self.death.is_finite

    def to_json(self) -> Dict[str, object]:
        return {'degree': self.degree, 'birth': format_rational(self.birth), 'death': self.death.to_json()}

    def __str__(self) -> str:
        death = "∞)" if self.is_infinite else f"{self.death})"
        return f"deg {self.degree}: [{format_rational(self.birth)}, {death}"


@dataclass(frozen=True)
class Barcode:
    """
    Bars for one fundamental window of degrees window_start .. window_start+7.
    Bars in any other degree follow from the shift rule.
    """
    bars: Tuple[Bar, ...]
    window_start: int = 0

    def __post_init__(self):
        for bar in self.bars:
            if not self.window_start <= bar.degree < self.window_start + PERIOD:
                raise ValidationError(f"bar in degree {bar.degree} lies outside the window starting at {self.window_start}")
            if not ExtendedRational.of(bar.birth) < bar.death:
                raise ValidationError(f"bar {bar} has birth ≥ death")

    def bars_in(self, d: int) -> List[Bar]:
        shift, representative = divmod(d - self.window_start, PERIOD)
        representative += self.window_start
        return [bar.shifted(shift) for bar in self.bars if bar.degree == representative]

    def dimension(self, r: RationalLike, d: int) -> int:
        return sum(1 for bar in self.bars_in(d) if bar.contains(r))

    def rewindowed(self, window_start: int) -> "Barcode":
        bars = []
        for d in range(window_start, window_start + PERIOD):
            bars.extend(self.bars_in(d))
        return Barcode(tuple(sorted(bars)), window_start)

    def is_empty(self) -> bool:
        return not self.bars

    def to_json(self) -> Dict[str, object]:
        return {'window': [self.window_start, self.window_start + PERIOD - 1],
                'bars': [bar.to_json() for bar in self.bars]}


def _reduce_columns(matrix: np.ndarray) -> Tuple[np.ndarray, Dict[int, int]]:
    """
    Standard persistence reduction, left to right.

    Returns:
        The reduced columns (as rows of the returned array) and the map
        low(row) → column for every nonzero reduced column.
    """
    columns = matrix.T.copy()
    pivot_of: Dict[int, int] = {}
    for j in range(columns.shape[0]):
        while True:
            nonzero = np.flatnonzero(columns[j])
            if nonzero.size == 0:
                break
            low = int(nonzero[-1])
            if low not in pivot_of:
                pivot_of[low] = j
                break
            columns[j] ^= columns[pivot_of[low]]
    return columns, pivot_of


def barcode(c: FilteredComplex, window_start: int = 0) -> Barcode:
    """
    Barcode over one fundamental window by column reduction per degree.

    Rows and columns are ordered by (cs, label), which refines the filtration.
    """
    bars: List[Bar] = []
    for d in range(window_start, window_start + PERIOD):
        chains = c.translates(d)
        if not chains:
            continue
        outgoing = c.boundary_matrix(chains, c.translates(d - 1)).to_dense()
        reduced_out, _ = _reduce_columns(outgoing)
        positive = [j for j in range(len(chains)) if not reduced_out[j].any()]
        above = c.translates(d + 1)
        _, pivot_of = _reduce_columns(c.boundary_matrix(above, chains).to_dense())
        for i in positive:
            birth = chains[i].cs
            if i in pivot_of:
                death = above[pivot_of[i]].cs
                bars.append(Bar(d, birth, ExtendedRational.of(death)))
            else:
                bars.append(Bar(d, birth, INF))
    result = Barcode(tuple(sorted(bars)), window_start)
    logger.debug(f"Barcode computed: {len(result.bars)} bars in window {window_start}..{window_start + PERIOD - 1}")
    return result


def connecting_rank(b: Barcode, r: RationalLike, r2: RationalLike, d: int) -> int:
    """Rank of F_r → F_{r2} in degree d: the bars containing both r and r2."""
    if r > r2:
        raise ValidationError(f"connecting map requested from {format_rational(r)} down to {format_rational(r2)}")
    return sum(1 for bar in b.bars_in(d) if bar.contains(r) and bar.contains(r2))
