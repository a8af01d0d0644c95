"""
Exact triangles at chain level and at rank level.

This module handles:
- TriangleData: three complexes C_0, C_1, C_2 (indices mod 3) with maps
  f_i: C_i → C_{i−1}, g_i: C_i → C_{i−2}, h_i and q_i: C_i → C_i.
- verify_identities and detect_triangle: the four identities, q ≃ id, and
  the comparison maps (f_i, g_i): C_i → Cone(f_{i−1}).
- exactness_check for rank data with maps on homology.
- The surgery rank calculus on ℤ/8-graded dimension vectors.
- random_triangle, a generator of data satisfying every identity.
"""
import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from src.algebra.gf2_chain import (
    BitMatrix, ChainMap, GradedComplex, cone, find_nullhomotopy, homology_dims, induced_map,
    is_homotopy, is_quasi_isomorphism, random_chain_map, random_complex, random_invertible, random_map, rank,
)
from src.errors import ManifestError, ValidationError, VerificationError
from src.source_lines import locate

logger = logging.getLogger(__name__)


# --- Graded Dimension Vectors ---

@dataclass(frozen=True)
class GradedDimVector:
    """Dimensions indexed by ℤ/8 (or ℤ/4); the period is the length of `dims`."""
    dims: Tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) not in (4, 8):
            raise ValidationError(f"a graded dimension vector has 4 or 8 entries, got {len(self.dims)}")
        if any(d < 0 for d in self.dims):
            raise ValidationError(f"negative dimension in {list(self.dims)}")

    @classmethod
    def parse(cls, text: str) -> "GradedDimVector":
        try:
            return cls(tuple(int(part) for part in text.split(',')))
        except ValueError:
            raise ValidationError(f"expected comma-separated integers, got {text!r}") from None

    @classmethod
    def zero(cls, period: int = 8) -> "GradedDimVector":
        return cls((0,) * period)

    @property
    def period(self) -> int:
        return len(self.dims)

    def __getitem__(self, d: int) -> int:
        return self.dims[d % self.period]

    def __add__(self, other: "GradedDimVector") -> "GradedDimVector":
        if other.period != self.period:
            raise ValidationError(f"cannot add vectors of periods {self.period} and {other.period}")
        return GradedDimVector(tuple(a + b for a, b in zip(self.dims, other.dims)))

    @property
    def total(self) -> int:
        return sum(self.dims)

    def shifted(self, s: int) -> "GradedDimVector":
        """The vector V_{*+s}: entry d is the old entry d + s."""
        return GradedDimVector(tuple(self[d + s] for d in range(self.period)))

    def collapse(self, period: int = 4) -> "GradedDimVector":
        if self.period % period:
            raise ValidationError(f"cannot collapse a ℤ/{self.period} vector to ℤ/{period}")
        return GradedDimVector(tuple(sum(self.dims[j::period]) for j in range(period)))

    def support(self) -> List[int]:
        return [d for d, n in enumerate(self.dims) if n]

    def to_json(self) -> List[int]:
        return list(self.dims)

    def __str__(self) -> str:
        return "(" + ", ".join(str(d) for d in self.dims) + ")"


def euler_characteristic(v: GradedDimVector) -> int:
    return sum(n if d % 2 == 0 else -n for d, n in enumerate(v.dims))


# --- Surgery Rank Calculus ---

def surgery_summands(n: int, base: GradedDimVector) -> List[GradedDimVector]:
    """
    The |n| summands of I_*(S³_{1/n}(K)): base shifted by 2i·sign(n), i = 0 … |n|−1.

    Raises:
        ValidationError: If n = 0 (that surgery is not a homology sphere).
    """
    if n == 0:
        raise ValidationError("surgery coefficient 1/0 is not a homology sphere surgery; n must be nonzero")
    if base.period != 8:
        raise ValidationError("surgery ranks need a ℤ/8-graded base vector")
    sign = 1 if n > 0 else -1
    return [base.shifted(2 * i * sign) for i in range(abs(n))]


def surgery_ranks(n: int, base: GradedDimVector) -> GradedDimVector:
    """dims(d) = Σ_{i<|n|} base(d + 2i·sign(n)), base read as I_*(S³_{sign(n)}(K))."""
    total = GradedDimVector.zero(8)
    for summand in surgery_summands(n, base):
        total = total + summand
    return total


def degree_shift_bridge(minus_one: GradedDimVector) -> GradedDimVector:
    """I_*(S³₁(K)) on ℤ/4 from I_*(S³₋₁(K)): collapse, then I_e(S³₁) = I_{e+3}(S³₋₁)."""
    return minus_one.collapse(4).shifted(3)


# --- Exactness on Homology ---

@dataclass(frozen=True)
class HomologyMap:
    """A map V_j → V_{j+1} between vertices of a rank triangle, blocks[k]: degree k → k + degree."""
    degree: int
    blocks: Mapping[int, BitMatrix]

    def block(self, k: int, period: int) -> BitMatrix:
        return self.blocks[k % period]


@dataclass
class ExactnessVerdict:
    exact: bool
    failures: List[Tuple[int, int, str]] = field(default_factory=list)
    forced_isomorphisms: List[str] = field(default_factory=list)
    checked_vertices: List[int] = field(default_factory=list)


def _zero_map(source: GradedDimVector, target: GradedDimVector) -> HomologyMap:
    return HomologyMap(0, {k: BitMatrix.zeros(target[k], source[k]) for k in range(source.period)})


def exactness_check(vertices: Sequence[GradedDimVector],
                    maps: Sequence[Optional[HomologyMap]]) -> ExactnessVerdict:
    """
    Checks image = kernel at each vertex of V_0 → V_1 → V_2 → V_0.

    maps[j] goes V_j → V_{j+1} with its own degree shift. A missing map is
    treated as zero when its source or target vanishes, and otherwise leaves
    the two adjacent vertices unchecked.

    Raises:
        ValidationError: If block shapes do not match the vertex dimensions.
    """
    if len(vertices) != 3 or len(maps) != 3:
        raise ValidationError("a rank triangle has three vertices and three maps")
    period = vertices[0].period
    if any(v.period != period for v in vertices):
        raise ValidationError("triangle vertices must share one period")
    resolved: List[Optional[HomologyMap]] = []
    for j, m in enumerate(maps):
        source, target = vertices[j], vertices[(j + 1) % 3]
        if m is None and (source.total == 0 or target.total == 0):
            m = _zero_map(source, target)
        if m is not None:
            for k in range(period):
                expected = (target[k + m.degree], source[k])
                if m.block(k, period).shape != expected:
                    raise ValidationError(
                        f"map {j} in degree {k} has shape {m.block(k, period).shape}, expected {expected}"
                    )
        resolved.append(m)

    verdict = ExactnessVerdict(exact=True)
    for j in range(3):
        incoming, outgoing = resolved[(j - 1) % 3], resolved[j]
        if incoming is None or outgoing is None:
            continue
        verdict.checked_vertices.append(j)
        for e in range(period):
            into = incoming.block(e - incoming.degree, period)
            out = outgoing.block(e, period)
            if not (out @ into).is_zero():
                verdict.exact = False
                verdict.failures.append((j, e, "composite of consecutive maps is nonzero"))
            elif rank(into) + rank(out) != vertices[j][e]:
                verdict.exact = False
                verdict.failures.append((j, e, "image is smaller than kernel"))

    for j in range(3):
        if vertices[j].total != 0:
            continue
        opposite = resolved[(j + 1) % 3]
        if opposite is None:
            continue
        square = all(
            opposite.block(k, period).rows == opposite.block(k, period).cols
            and rank(opposite.block(k, period)) == opposite.block(k, period).rows
            for k in range(period)
        )
        description = f"V{(j + 1) % 3} → V{(j + 2) % 3} must be an isomorphism since V{j} = 0"
        verdict.forced_isomorphisms.append(description + ("" if square else " (violated)"))
        if not square:
            verdict.exact = False
    return verdict


# --- Triangle Data ---

@dataclass(frozen=True)
class TriangleData:
    """
    Chain-level triangle data; every list is indexed by i mod 3.

    q and homotopy are optional: a missing q_i is defined by the fourth
    identity, a missing homotopy is searched for by linear algebra.
    """
    period: int
    complexes: Tuple[GradedComplex, GradedComplex, GradedComplex]
    f: Tuple[ChainMap, ChainMap, ChainMap]
    g: Tuple[ChainMap, ChainMap, ChainMap]
    h: Tuple[ChainMap, ChainMap, ChainMap]
    q: Optional[Tuple[ChainMap, ChainMap, ChainMap]] = None
    homotopy: Optional[Tuple[Optional[ChainMap], Optional[ChainMap], Optional[ChainMap]]] = None

    def __post_init__(self):
        c = self.complexes
        if any(x.period != self.period for x in c):
            raise ValidationError(f"every complex must have period {self.period}")
        families = [('f', self.f, 1), ('g', self.g, 2), ('h', self.h, 0)]
        if self.q is not None:
            families.append(('q', self.q, 0))
        if self.homotopy is not None:
            families.append(('homotopy', self.homotopy, 0))
        for name, maps, step in families:
            if len(maps) != 3:
                raise ValidationError(f"expected three maps {name}_0, {name}_1, {name}_2")
            for i, m in enumerate(maps):
                if m is None:
                    continue
                if m.source != c[i] or m.target != c[(i - step) % 3]:
                    raise ValidationError(f"{name}_{i} must map C_{i} to C_{(i - step) % 3}")
        delta = [m.degree for m in self.f]
        p = self.period
        if (sum(delta) + 1) % p:
            raise ValidationError(
                f"degrees of f sum to {sum(delta)}; they must sum to −1 mod {p} so that q has degree 0"
            )
        for i in range(3):
            if self.g[i].degree != (delta[i] + delta[(i - 1) % 3] + 1) % p:
                raise ValidationError(f"g_{i} has degree {self.g[i].degree}, expected deg f_{i} + deg f_{i - 1} + 1")
            if self.h[i].degree != (sum(delta) + 2) % p:
                raise ValidationError(f"h_{i} has degree {self.h[i].degree}, expected {(sum(delta) + 2) % p}")
            if self.q is not None and self.q[i].degree != 0:
                raise ValidationError(f"q_{i} must have degree 0")
            if self.homotopy is not None and self.homotopy[i] is not None and self.homotopy[i].degree != 1 % p:
                raise ValidationError(f"homotopy witness for q_{i} must have degree 1")

    @property
    def total_dim(self) -> int:
        return sum(c.total_dim for c in self.complexes)


@dataclass(frozen=True)
class IdentityFailure:
    identity: str
    vertex: int
    degree: Optional[int]

    def __str__(self) -> str:
        where = f" in degree {self.degree}" if self.degree is not None else ""
        return f"{self.identity} fails at i = {self.vertex}{where}"


@dataclass
class IdentityReport:
    checked: List[str]
    failures: List[IdentityFailure]
    q: Tuple[ChainMap, ...]
    homotopy_route: Optional[str] = None
    homotopies: Tuple[Optional[ChainMap], ...] = ()

    @property
    def holds(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> Optional[IdentityFailure]:
        return self.failures[0] if self.failures else None


def _first_nonzero(m: ChainMap) -> Optional[int]:
    for k in range(m.period):
        if not m.block(k).is_zero():
            return k
    return None


def verify_identities(t: TriangleData) -> IdentityReport:
    """
    Checks, for every i mod 3:
        d f_i + f_i d = 0
        d g_i + f_{i−1} f_i + g_i d = 0
        d h_i + f_{i−2} g_i + g_{i−1} f_i + h_i d = q_i
        q_i ≃ id, through the supplied witness or a solved homotopy.
    d∘d = 0 holds for every GradedComplex by construction.
    """
    f, g, h = t.f, t.g, t.h
    failures: List[IdentityFailure] = []
    for i in range(3):
        defect = f[i].defect_degree()
        if defect is not None:
            failures.append(IdentityFailure("d f + f d = 0", i, defect))
    for i in range(3):
        lhs = g[i].boundary_commutator() + f[(i - 1) % 3] @ f[i]
        degree = _first_nonzero(lhs)
        if degree is not None:
            failures.append(IdentityFailure("d g + f f + g d = 0", i, degree))
    q_maps: List[ChainMap] = []
    for i in range(3):
        lhs = h[i].boundary_commutator() + f[(i - 2) % 3] @ g[i] + g[(i - 1) % 3] @ f[i]
        if t.q is not None:
            degree = _first_nonzero(lhs + t.q[i])
            if degree is not None:
                failures.append(IdentityFailure("d h + f g + g f + h d = q", i, degree))
            q_maps.append(t.q[i])
        else:
            q_maps.append(lhs)

    routes = set()
    homotopies: List[Optional[ChainMap]] = []
    if not failures:
        for i in range(3):
            difference = q_maps[i] + ChainMap.identity(t.complexes[i])
            witness = t.homotopy[i] if t.homotopy is not None else None
            if witness is not None:
                routes.add("witness")
                if not is_homotopy(witness, difference):
                    failures.append(IdentityFailure("supplied homotopy q ≃ id", i, None))
                homotopies.append(witness)
                continue
            routes.add("solved")
            solved = find_nullhomotopy(difference)
            if solved is None:
                failures.append(IdentityFailure("q ≃ id", i, None))
            homotopies.append(solved)

    report = IdentityReport(
        checked=["d∘d = 0", "d f + f d = 0", "d g + f f + g d = 0", "d h + f g + g f + h d = q", "q ≃ id"],
        failures=failures,
        q=tuple(q_maps),
        homotopy_route="+".join(sorted(routes)) if routes else None,
        homotopies=tuple(homotopies),
    )
    if failures:
        logger.info(f"Triangle identities fail: {report.first_failure}")
    return report


# --- Triangle Detection ---

@dataclass
class VertexVerdict:
    vertex: int
    quasi_isomorphism: bool
    homology: List[int]
    cone_homology: List[int]
    notes: List[str] = field(default_factory=list)


@dataclass
class TriangleVerdict:
    detected: bool
    vertices: List[VertexVerdict]
    f_ranks: Dict[int, List[int]]
    exactness: ExactnessVerdict
    homotopy_route: Optional[str]


def comparison_map(t: TriangleData, i: int) -> ChainMap:
    """(f_i, g_i): C_i → Cone(f_{i−1}), of degree deg f_i."""
    previous = t.f[(i - 1) % 3]
    target = cone(previous)
    blocks = {k: BitMatrix.vstack(t.f[i].block(k), t.g[i].block(k)) for k in range(t.period)}
    return ChainMap.create(t.complexes[i], target, t.f[i].degree, blocks)


def _induced_family(m: ChainMap) -> HomologyMap:
    return HomologyMap(m.degree, {k: induced_map(m, k) for k in range(m.period)})


def detect_triangle(t: TriangleData) -> TriangleVerdict:
    """
    Confirms that every comparison map (f_i, g_i) is a quasi-isomorphism,
    and checks exactness of H(C_0) → H(C_2) → H(C_1) → H(C_0) under f_*.

    Raises:
        VerificationError: If the identities or q ≃ id fail.
    """
    report = verify_identities(t)
    if not report.holds:
        raise VerificationError(f"triangle identities do not hold: {report.first_failure}")
    vertices = []
    for i in range(3):
        comparison = comparison_map(t, i)
        defect = comparison.defect_degree()
        if defect is not None:
            raise VerificationError(f"(f_{i}, g_{i}) is not a chain map in degree {defect}")
        quasi = is_quasi_isomorphism(comparison)
        verdict = VertexVerdict(
            vertex=i,
            quasi_isomorphism=quasi,
            homology=homology_dims(t.complexes[i]),
            cone_homology=homology_dims(comparison.target),
        )
        if quasi and t.complexes[(i - 1) % 3].is_zero():
            verdict.notes.append(f"g_{i} induces an isomorphism H(C_{i}) → H(C_{(i - 2) % 3})")
        if quasi and not any(verdict.cone_homology):
            verdict.notes.append(f"Cone(f_{(i - 1) % 3}) is acyclic, so H(C_{i}) = 0")
        vertices.append(verdict)

    induced = [_induced_family(m) for m in t.f]
    ranks = {i: [rank(induced[i].block(k, t.period)) for k in range(t.period)] for i in range(3)}
    dims = [GradedDimVector(tuple(v.homology)) for v in vertices]
    # traverse C_0 → C_2 → C_1 → C_0 along f_0, f_2, f_1
    exactness = exactness_check([dims[0], dims[2], dims[1]], [induced[0], induced[2], induced[1]])
    detected = all(v.quasi_isomorphism for v in vertices)
    logger.info(f"Triangle detection: detected={detected}, exact={exactness.exact}")
    return TriangleVerdict(detected, vertices, ranks, exactness, report.homotopy_route)


# --- Random Generation ---

def _conjugate_complex(c: GradedComplex, changes) -> GradedComplex:
    differentials = {k: changes[(k - 1) % c.period][0] @ c.d(k) @ changes[k][1] for k in range(c.period)}
    return GradedComplex.create(c.period, dict(c.dims), differentials)


def _conjugate_map(m: ChainMap, source: GradedComplex, target: GradedComplex, source_changes, target_changes) -> ChainMap:
    blocks = {
        k: target_changes[(k + m.degree) % m.period][0] @ m.block(k) @ source_changes[k][1]
        for k in range(m.period)
    }
    return ChainMap.create(source, target, m.degree, blocks)


def random_triangle(rng: random.Random, period: int = 8, max_dim: int = 24) -> TriangleData:
    """
    Random data satisfying the four identities with every q_i = id.

    Starts from A →φ B → Cone(φ) → A with the standard maps, perturbs g and h
    by homotopies that keep every identity, then changes basis in each complex.
    The total dimension is at most max_dim.
    """
    budget = max_dim // 2
    a = random_complex(rng, period, rng.randint(0, budget))
    b = random_complex(rng, period, budget - a.total_dim)
    delta = rng.randrange(period)
    phi = random_chain_map(rng, a, b, delta)
    c1 = cone(phi)
    complexes = (a, c1, b)

    def zeros(rows, cols):
        return BitMatrix.zeros(rows, cols)

    f0 = phi
    f1 = ChainMap.create(c1, a, 0, {
        k: BitMatrix.hstack(BitMatrix.identity(a.dim(k)), zeros(a.dim(k), b.dim(k + delta + 1)))
        for k in range(period)
    })
    f2 = ChainMap.create(b, c1, -delta - 1, {
        m: BitMatrix.vstack(zeros(a.dim(m - delta - 1), b.dim(m)), BitMatrix.identity(b.dim(m)))
        for m in range(period)
    })
    g0 = ChainMap.create(a, c1, 0, {
        k: BitMatrix.vstack(BitMatrix.identity(a.dim(k)), zeros(b.dim(k + delta + 1), a.dim(k)))
        for k in range(period)
    })
    g1 = ChainMap.create(c1, b, delta + 1, {
        k: BitMatrix.hstack(zeros(b.dim(k + delta + 1), a.dim(k)), BitMatrix.identity(b.dim(k + delta + 1)))
        for k in range(period)
    })
    g2 = ChainMap.zero(b, a, -delta)
    f = [f0, f1, f2]
    g = [g0, g1, g2]
    h = [ChainMap.zero(complexes[i], complexes[i], 1) for i in range(3)]

    # g_i += ds + sd and h_i += f_{i−2} s_i + s_{i−1} f_i keep every identity
    s = [random_map(rng, complexes[i], complexes[(i - 2) % 3], g[i].degree + 1) for i in range(3)]
    for i in range(3):
        g[i] = g[i] + s[i].boundary_commutator()
    for i in range(3):
        h[i] = h[i] + f[(i - 2) % 3] @ s[i] + s[(i - 1) % 3] @ f[i]
        h[i] = h[i] + random_map(rng, complexes[i], complexes[i], 2).boundary_commutator()

    changes = [{k: random_invertible(rng, c.dim(k)) for k in range(period)} for c in complexes]
    conjugated = tuple(_conjugate_complex(c, changes[i]) for i, c in enumerate(complexes))

    def move(m: ChainMap, i: int, step: int) -> ChainMap:
        j = (i - step) % 3
        return _conjugate_map(m, conjugated[i], conjugated[j], changes[i], changes[j])

    return TriangleData(
        period=period,
        complexes=conjugated,
        f=tuple(move(f[i], i, 1) for i in range(3)),
        g=tuple(move(g[i], i, 2) for i in range(3)),
        h=tuple(move(h[i], i, 0) for i in range(3)),
    )


# --- Serialization ---

def _parse_complex(raw: Mapping[str, Any], period: int, where: str) -> GradedComplex:
    dims = {int(k): int(v) for k, v in raw.get('dims', {}).items()}
    reduced = {k % period: 0 for k in range(period)}
    for k, v in dims.items():
        reduced[k % period] += v
    differentials = {}
    for k, entries in raw.get('differential', {}).items():
        k = int(k)
        differentials[k] = BitMatrix.from_entries(reduced[(k - 1) % period], reduced[k % period], entries)
    try:
        return GradedComplex.create(period, dims, differentials)
    except ValidationError as e:
        raise ValidationError(f"{where}: {e}") from e


def _parse_map(raw: Optional[Mapping[str, Any]], source: GradedComplex, target: GradedComplex,
               default_degree: int, where: str) -> ChainMap:
    if raw is None:
        return ChainMap.zero(source, target, default_degree)
    degree = int(raw.get('degree', default_degree))
    blocks = {}
    for k, entries in raw.get('blocks', {}).items():
        k = int(k)
        blocks[k] = BitMatrix.from_entries(target.dim(k + degree), source.dim(k), entries)
    try:
        return ChainMap.create(source, target, degree, blocks)
    except ValidationError as e:
        raise ValidationError(f"{where}: {e}") from e


def parse_triangle(data: Mapping[str, Any]) -> TriangleData:
    """
    Builds TriangleData from its JSON form. Null maps are zero maps; the
    degree of a null g or h follows from the degrees of f.

    Raises:
        ValidationError: With subject ('field', key) naming the part that failed.
    """
    if not isinstance(data, dict):
        raise ValidationError("triangle data must be a JSON object")
    part = 'period'
    try:
        period = data['period']
        if not isinstance(period, int) or isinstance(period, bool) or period < 1:
            raise ValidationError(f"period must be a positive integer, got {period!r}")
        part = 'complexes'
        raw_complexes = data['complexes']
        if not isinstance(raw_complexes, list) or len(raw_complexes) != 3:
            raise ValidationError("expected exactly three complexes")
        complexes = tuple(_parse_complex(raw, period, f"C_{i}") for i, raw in enumerate(raw_complexes))
        part = 'f'
        raw_f = data['f']
        f = tuple(_parse_map(raw_f[i], complexes[i], complexes[(i - 1) % 3], 0, f"f_{i}") for i in range(3))
        delta = [m.degree for m in f]
        part = 'g'
        raw_g = data.get('g') or [None] * 3
        g = tuple(_parse_map(raw_g[i], complexes[i], complexes[(i - 2) % 3],
                             delta[i] + delta[(i - 1) % 3] + 1, f"g_{i}")
                  for i in range(3))
        part = 'h'
        raw_h = data.get('h') or [None] * 3
        h = tuple(_parse_map(raw_h[i], complexes[i], complexes[i], sum(delta) + 2, f"h_{i}") for i in range(3))
        q = None
        if data.get('q') is not None:
            part = 'q'
            q = tuple(_parse_map(data['q'][i], complexes[i], complexes[i], 0, f"q_{i}") for i in range(3))
        homotopy = None
        if data.get('homotopy') is not None:
            part = 'homotopy'
            homotopy = tuple(
                None if data['homotopy'][i] is None
                else _parse_map(data['homotopy'][i], complexes[i], complexes[i], 1, f"homotopy_{i}")
                for i in range(3)
            )
    except ValidationError as e:
        if e.subject is None:
            e.subject = ('field', part)
        raise
    except (KeyError, TypeError, AttributeError, ValueError, IndexError) as e:
        raise ValidationError(f"malformed triangle data in '{part}': {type(e).__name__}: {e}",
                              subject=('field', part)) from e
    return TriangleData(period, complexes, f, g, h, q, homotopy)


def load_triangle(path: Union[str, Path]) -> TriangleData:
    """
    Loads TriangleData from a JSON file.

    Raises:
        ManifestError: On syntax errors (with their line) or structural errors.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ManifestError(f"cannot read triangle data: {e}", source=str(path)) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestError(e.msg, line=e.lineno, source=str(path)) from e
    try:
        return parse_triangle(data)
    except ValidationError as e:
        raise ManifestError(str(e), line=locate(text, e.subject), source=str(path)) from e
