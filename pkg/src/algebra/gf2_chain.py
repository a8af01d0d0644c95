"""
Exact linear algebra over the two-element field and periodic chain complexes.

This module provides:
- BitMatrix, a row-major bit-packed matrix with row reduction.
- rank, kernel and solve built on reduced row echelon form.
- GradedComplex and ChainMap for ℤ/period-graded complexes.
- homology with canonical bases, maps induced on homology, mapping cones.
- find_nullhomotopy, which solves dK + Kd = φ as one linear system.

Pivots are always the first nonzero entry, so every basis produced here
is deterministic.
"""
import logging
import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.errors import ValidationError

logger = logging.getLogger(__name__)

SUPPORTED_PERIODS = (4, 8)


# --- Bit Matrices ---

class BitMatrix:
    """
    A rows × cols matrix over the two-element field.

    Rows are packed little-endian into uint8 words, so a row operation
    is a single XOR of byte arrays. Padding bits are always zero.
    """

    __slots__ = ('rows', 'cols', 'packed')

    def __init__(self, rows: int, cols: int, packed: Optional[np.ndarray] = None):
        if rows < 0 or cols < 0:
            raise ValidationError(f"negative matrix shape {rows}x{cols}")
        width = (cols + 7) // 8
        if packed is None:
            packed = np.zeros((rows, width), dtype=np.uint8)
        elif packed.shape != (rows, width):
            raise ValidationError(f"packed data of shape {packed.shape} does not fit {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.packed = packed
        self.packed.setflags(write=False)

    # --- Constructors ---

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        dense = np.asarray(array, dtype=np.uint8) & 1
        if dense.ndim != 2:
            raise ValidationError(f"expected a 2-dimensional array, got shape {dense.shape}")
        rows, cols = dense.shape
        if rows == 0 or cols == 0:
            return cls(rows, cols)
        return cls(rows, cols, np.packbits(dense, axis=1, bitorder='little'))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Sequence[int]]) -> "BitMatrix":
        """Builds a matrix from (row, col) positions of its ones; repeated positions cancel."""
        dense = np.zeros((rows, cols), dtype=np.uint8)
        for entry in entries:
            if len(entry) != 2:
                raise ValidationError(f"matrix entry {list(entry)} is not a [row, col] pair")
            i, j = int(entry[0]), int(entry[1])
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValidationError(f"entry [{i}, {j}] lies outside a {rows}x{cols} matrix")
            dense[i, j] ^= 1
        return cls.from_dense(dense)

    @classmethod
    def hstack(cls, *blocks: "BitMatrix") -> "BitMatrix":
        rows = {b.rows for b in blocks}
        if len(rows) > 1:
            raise ValidationError(f"cannot stack blocks with row counts {sorted(rows)} side by side")
        if not blocks:
            return cls(0, 0)
        return cls.from_dense(np.hstack([b.to_dense() for b in blocks]))

    @classmethod
    def vstack(cls, *blocks: "BitMatrix") -> "BitMatrix":
        cols = {b.cols for b in blocks}
        if len(cols) > 1:
            raise ValidationError(f"cannot stack blocks with column counts {sorted(cols)} vertically")
        if not blocks:
            return cls(0, 0)
        return cls.from_dense(np.vstack([b.to_dense() for b in blocks]))

    # --- Views ---

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        return np.unpackbits(self.packed, axis=1, count=self.cols, bitorder='little')

    def entries(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.to_dense())]

    def take_columns(self, columns: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense()[:, list(columns)].reshape(self.rows, len(columns)))

    def take_rows(self, rows: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense()[list(rows), :].reshape(len(rows), self.cols))

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def is_zero(self) -> bool:
        return not self.packed.any()

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return int((self.packed[i, j >> 3] >> (j & 7)) & 1)

    # --- Arithmetic ---

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValidationError(f"cannot add a {self.rows}x{self.cols} and a {other.rows}x{other.cols} matrix")
        return BitMatrix(self.rows, self.cols, np.bitwise_xor(self.packed, other.packed))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValidationError(f"cannot multiply a {self.rows}x{self.cols} by a {other.rows}x{other.cols} matrix")
        product = self.to_dense().astype(np.int64) @ other.to_dense().astype(np.int64)
        return BitMatrix.from_dense(product & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.packed, other.packed)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.packed.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, ones={self.entries()})"


def rref(m: BitMatrix) -> Tuple[BitMatrix, List[int]]:
    """
    Reduced row echelon form with first-nonzero pivot choice.

    Returns:
        The reduced matrix and the list of pivot columns, in order.
    """
    work = m.packed.copy()
    pivots: List[int] = []
    row = 0
    for col in range(m.cols):
        if row == m.rows:
            break
        byte, bit = divmod(col, 8)
        column_bits = (work[:, byte] >> bit) & 1
        hits = np.flatnonzero(column_bits[row:])
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
            column_bits[[row, pivot]] = column_bits[[pivot, row]]
        mask = column_bits.astype(bool)
        mask[row] = False
        work[mask] ^= work[row]
        pivots.append(col)
        row += 1
    return BitMatrix(m.rows, m.cols, work), pivots


def rank(m: BitMatrix) -> int:
    return len(rref(m)[1])


def kernel(m: BitMatrix) -> BitMatrix:
    """Columns of the result are a basis of ker m, one per free column in increasing order."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = np.zeros((m.cols, len(free)), dtype=np.uint8)
    if free:
        basis[free, np.arange(len(free))] = 1
        if pivots:
            basis[pivots, :] = reduced.to_dense()[:len(pivots)][:, free]
    return BitMatrix.from_dense(basis)


def solve(m: BitMatrix, b: BitMatrix) -> Optional[BitMatrix]:
    """
    Solves mX = b, setting free variables to zero.

    Returns:
        X, or None when some column of b lies outside the column space of m.
    """
    if b.rows != m.rows:
        raise ValidationError(f"right-hand side has {b.rows} rows, expected {m.rows}")
    reduced, pivots = rref(BitMatrix.hstack(m, b))
    if pivots and pivots[-1] >= m.cols:
        return None
    solution = np.zeros((m.cols, b.cols), dtype=np.uint8)
    if pivots:
        solution[pivots, :] = reduced.to_dense()[:len(pivots), m.cols:]
    return BitMatrix.from_dense(solution)


def random_invertible(rng: random.Random, n: int, steps: Optional[int] = None) -> Tuple[BitMatrix, BitMatrix]:
    """A random invertible n×n matrix and its inverse, built from elementary row additions."""
    forward = np.eye(n, dtype=np.uint8)
    backward = np.eye(n, dtype=np.uint8)
    for _ in range(steps if steps is not None else 3 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        forward[i] ^= forward[j]
        backward[:, j] ^= backward[:, i]
    return BitMatrix.from_dense(forward), BitMatrix.from_dense(backward)


# --- Graded Complexes ---

@dataclass(frozen=True)
class GradedComplex:
    """
    A ℤ/period-graded chain complex.

    differentials[k] is d_k: C_k → C_{k−1}, a dim(k−1) × dim(k) matrix.
    Keys of both maps are residues modulo the period.
    """
    period: int
    dims: Mapping[int, int]
    differentials: Mapping[int, BitMatrix]

    @classmethod
    def create(cls, period: int, dims: Mapping[int, int],
               differentials: Optional[Mapping[int, BitMatrix]] = None) -> "GradedComplex":
        if period not in SUPPORTED_PERIODS:
            raise ValidationError(f"unsupported grading period {period}; expected one of {SUPPORTED_PERIODS}")
        normalized_dims: Dict[int, int] = {k: 0 for k in range(period)}
        for degree, dim in dims.items():
            if int(dim) < 0:
                raise ValidationError(f"negative dimension {dim} in degree {degree}")
            normalized_dims[int(degree) % period] += int(dim)
        normalized_d: Dict[int, BitMatrix] = {}
        for k in range(period):
            normalized_d[k] = BitMatrix.zeros(normalized_dims[(k - 1) % period], normalized_dims[k])
        for degree, matrix in (differentials or {}).items():
            normalized_d[int(degree) % period] = matrix
        return cls(period, normalized_dims, normalized_d)

    @classmethod
    def zero(cls, period: int) -> "GradedComplex":
        return cls.create(period, {})

    def __post_init__(self):
        for k in range(self.period):
            expected = (self.dim(k - 1), self.dim(k))
            if self.d(k).shape != expected:
                raise ValidationError(
                    f"differential in degree {k} has shape {self.d(k).shape}, expected {expected}"
                )
        for k in range(self.period):
            if not (self.d(k - 1) @ self.d(k)).is_zero():
                raise ValidationError(f"d∘d ≠ 0 starting in degree {k}")

    def dim(self, k: int) -> int:
        return self.dims.get(k % self.period, 0)

    def d(self, k: int) -> BitMatrix:
        return self.differentials[k % self.period]

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0


def collapse(c: GradedComplex, period: int) -> GradedComplex:
    """
    Collapses the grading to a smaller period dividing the current one.

    Degree j of the result is the direct sum of the degrees m ≡ j, in
    increasing m; the differential is block diagonal.
    """
    if period == c.period:
        return c
    if c.period % period:
        raise ValidationError(f"cannot collapse a ℤ/{c.period} grading to ℤ/{period}")
    members = {j: [m for m in range(c.period) if m % period == j] for j in range(period)}
    offsets: Dict[int, int] = {}
    for j, degrees in members.items():
        running = 0
        for m in degrees:
            offsets[m] = running
            running += c.dim(m)
    dims = {j: sum(c.dim(m) for m in members[j]) for j in range(period)}
    differentials = {}
    for j in range(period):
        dense = np.zeros((dims[(j - 1) % period], dims[j]), dtype=np.uint8)
        for m in members[j]:
            block = c.d(m).to_dense()
            row, col = offsets[(m - 1) % c.period], offsets[m]
            dense[row:row + block.shape[0], col:col + block.shape[1]] = block
        differentials[j] = BitMatrix.from_dense(dense)
    return GradedComplex.create(period, dims, differentials)


def random_complex(rng: random.Random, period: int, max_dim: int) -> GradedComplex:
    """
    A random complex of total dimension at most max_dim.

    Built as a sum of cancelling pairs and free generators, then conjugated
    by a random change of basis in every degree.
    """
    pairs = {k: 0 for k in range(period)}
    free = {k: 0 for k in range(period)}
    budget = rng.randint(0, max_dim)
    while budget > 0:
        k = rng.randrange(period)
        if budget >= 2 and rng.random() < 0.5:
            pairs[k] += 1
            budget -= 2
        else:
            free[k] += 1
            budget -= 1
    dims = {k: free[k] + pairs[k] + pairs[(k + 1) % period] for k in range(period)}
    changes = {k: random_invertible(rng, dims[k]) for k in range(period)}
    differentials = {}
    for k in range(period):
        target = (k - 1) % period
        dense = np.zeros((dims[target], dims[k]), dtype=np.uint8)
        # pair sources sit after the free generators, pair targets last
        for p in range(pairs[k]):
            dense[free[target] + pairs[target] + p, free[k] + p] = 1
        plain = BitMatrix.from_dense(dense)
        differentials[k] = changes[target][0] @ plain @ changes[k][1]
    return GradedComplex.create(period, dims, differentials)


# --- Homology ---

@dataclass(frozen=True)
class Homology:
    """
    Homology in one degree with canonical bases.

    `cycles` spans ker d_k, `boundaries` spans im d_{k+1}, and
    `representatives` are the cycles chosen, by first-pivot selection after
    the boundaries, as a basis of the quotient.
    """
    degree: int
    dimension: int
    cycles: BitMatrix
    boundaries: BitMatrix
    representatives: BitMatrix

    def coordinates(self, vectors: BitMatrix) -> BitMatrix:
        """Coordinates of cycle columns in the basis of representatives."""
        basis = BitMatrix.hstack(self.boundaries, self.representatives)
        solution = solve(basis, vectors)
        if solution is None:
            raise ValidationError(f"vectors in degree {self.degree} are not cycles")
        return solution.take_rows(range(self.boundaries.cols, basis.cols))


def homology(c: GradedComplex, k: int) -> Homology:
    cycles = kernel(c.d(k))
    boundaries = c.d(k + 1)
    _, pivots = rref(BitMatrix.hstack(boundaries, cycles))
    chosen = [p - boundaries.cols for p in pivots if p >= boundaries.cols]
    return Homology(
        degree=k,
        dimension=len(chosen),
        cycles=cycles,
        boundaries=boundaries,
        representatives=cycles.take_columns(chosen),
    )


def homology_dims(c: GradedComplex) -> List[int]:
    return [homology(c, k).dimension for k in range(c.period)]


# --- Graded Maps ---

@dataclass(frozen=True)
class ChainMap:
    """
    A graded map f: C → C' of the given degree, blocks[k]: C_k → C'_{k+degree}.

    Nothing here assumes f commutes with the differentials; `defect_degree`
    and `is_chain_map` check it. Over the two-element field commuting and
    anticommuting coincide.
    """
    source: GradedComplex
    target: GradedComplex
    degree: int
    blocks: Mapping[int, BitMatrix]

    @classmethod
    def create(cls, source: GradedComplex, target: GradedComplex, degree: int,
               blocks: Optional[Mapping[int, BitMatrix]] = None) -> "ChainMap":
        if source.period != target.period:
            raise ValidationError(f"map between periods {source.period} and {target.period}")
        period = source.period
        normalized = {k: BitMatrix.zeros(target.dim(k + degree), source.dim(k)) for k in range(period)}
        for k, block in (blocks or {}).items():
            normalized[int(k) % period] = block
        return cls(source, target, degree % period, normalized)

    @classmethod
    def identity(cls, c: GradedComplex) -> "ChainMap":
        return cls.create(c, c, 0, {k: BitMatrix.identity(c.dim(k)) for k in range(c.period)})

    @classmethod
    def zero(cls, source: GradedComplex, target: GradedComplex, degree: int) -> "ChainMap":
        return cls.create(source, target, degree)

    def __post_init__(self):
        for k in range(self.source.period):
            expected = (self.target.dim(k + self.degree), self.source.dim(k))
            if self.block(k).shape != expected:
                raise ValidationError(
                    f"map block in degree {k} has shape {self.block(k).shape}, expected {expected}"
                )

    def block(self, k: int) -> BitMatrix:
        return self.blocks[k % self.source.period]

    @property
    def period(self) -> int:
        return self.source.period

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if other.source != self.source or other.target != self.target:
            raise ValidationError("cannot add maps between different complexes")
        if other.degree != self.degree:
            raise ValidationError(f"cannot add maps of degrees {self.degree} and {other.degree}")
        return ChainMap.create(self.source, self.target, self.degree,
                               {k: self.block(k) + other.block(k) for k in range(self.period)})

    def __matmul__(self, first: "ChainMap") -> "ChainMap":
        """`g @ f` is the composite g∘f."""
        if first.target != self.source:
            raise ValidationError("composite of maps whose target and source differ")
        return ChainMap.create(first.source, self.target, first.degree + self.degree,
                               {k: self.block(k + first.degree) @ first.block(k) for k in range(self.period)})

    def boundary_commutator(self) -> "ChainMap":
        """The map dφ + φd, of degree one less."""
        blocks = {
            k: self.target.d(k + self.degree) @ self.block(k) + self.block(k - 1) @ self.source.d(k)
            for k in range(self.period)
        }
        return ChainMap.create(self.source, self.target, self.degree - 1, blocks)

    def defect_degree(self) -> Optional[int]:
        """First source degree where dφ + φd is nonzero, or None for a chain map."""
        commutator = self.boundary_commutator()
        for k in range(self.period):
            if not commutator.block(k).is_zero():
                return k
        return None

    def is_chain_map(self) -> bool:
        return self.defect_degree() is None


def induced_map(f: ChainMap, k: int) -> BitMatrix:
    """Matrix of f_*: H_k(C) → H_{k+deg}(C') in the canonical homology bases."""
    source_h = homology(f.source, k)
    target_h = homology(f.target, k + f.degree)
    images = f.block(k) @ source_h.representatives
    return target_h.coordinates(images)


def is_quasi_isomorphism(f: ChainMap) -> bool:
    for k in range(f.period):
        matrix = induced_map(f, k)
        if matrix.rows != matrix.cols or rank(matrix) != matrix.rows:
            return False
    return True


def cone(f: ChainMap) -> GradedComplex:
    """
    The mapping cone of a chain map of degree δ.

    Cone_k = C_k ⊕ C'_{k+δ+1} with differential [[d, 0], [f, d']]. For δ = 0
    this is C ⊕ C'[1] with the lower-triangular differential.

    Raises:
        ValidationError: If f is not a chain map, naming the offending degree.
    """
    defect = f.defect_degree()
    if defect is not None:
        raise ValidationError(f"cone requested for a map that is not a chain map (degree {defect})")
    source, target, delta = f.source, f.target, f.degree
    dims = {k: source.dim(k) + target.dim(k + delta + 1) for k in range(f.period)}
    differentials = {}
    for k in range(f.period):
        top = BitMatrix.hstack(source.d(k), BitMatrix.zeros(source.dim(k - 1), target.dim(k + delta + 1)))
        bottom = BitMatrix.hstack(f.block(k), target.d(k + delta + 1))
        differentials[k] = BitMatrix.vstack(top, bottom)
    return GradedComplex.create(f.period, dims, differentials)


# --- Homotopies ---

def _commutator_operator(source: GradedComplex, target: GradedComplex, degree: int) -> Tuple[BitMatrix, Dict[int, int]]:
    """
    The linear operator φ ↦ dφ + φd on maps of the given degree.

    Maps are vectorized block by block in degree order, each block row-major.
    Returns the operator and the column offset of every block.
    """
    period = source.period
    offsets, running = {}, 0
    for k in range(period):
        offsets[k] = running
        running += target.dim(k + degree) * source.dim(k)
    row_offsets, rows = {}, 0
    for k in range(period):
        row_offsets[k] = rows
        rows += target.dim(k + degree - 1) * source.dim(k)
    operator = np.zeros((rows, running), dtype=np.uint8)
    for k in range(period):
        height = target.dim(k + degree - 1) * source.dim(k)
        if height == 0:
            continue
        r = row_offsets[k]
        # d' φ_k
        left = np.kron(target.d(k + degree).to_dense(), np.eye(source.dim(k), dtype=np.uint8))
        c = offsets[k]
        operator[r:r + height, c:c + left.shape[1]] ^= left.astype(np.uint8)
        # φ_{k-1} d
        right = np.kron(np.eye(target.dim(k + degree - 1), dtype=np.uint8), source.d(k).to_dense().T)
        c = offsets[(k - 1) % period]
        operator[r:r + height, c:c + right.shape[1]] ^= right.astype(np.uint8)
    return BitMatrix.from_dense(operator), offsets


def _vectorize(f: ChainMap) -> BitMatrix:
    parts = [f.block(k).to_dense().reshape(-1) for k in range(f.period)]
    flat = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)
    return BitMatrix.from_dense(flat.reshape(-1, 1))


def _unvectorize(vector: np.ndarray, source: GradedComplex, target: GradedComplex,
                 degree: int, offsets: Dict[int, int]) -> ChainMap:
    blocks = {}
    for k in range(source.period):
        shape = (target.dim(k + degree), source.dim(k))
        size = shape[0] * shape[1]
        blocks[k] = BitMatrix.from_dense(vector[offsets[k]:offsets[k] + size].reshape(shape))
    return ChainMap.create(source, target, degree, blocks)


def find_nullhomotopy(phi: ChainMap) -> Optional[ChainMap]:
    """
    A map K of degree deg φ + 1 with dK + Kd = φ, or None if φ is not nullhomotopic.
    """
    operator, offsets = _commutator_operator(phi.source, phi.target, phi.degree + 1)
    solution = solve(operator, _vectorize(phi))
    if solution is None:
        return None
    return _unvectorize(solution.to_dense()[:, 0], phi.source, phi.target, phi.degree + 1, offsets)


def is_homotopy(k: ChainMap, phi: ChainMap) -> bool:
    """True when dK + Kd = φ."""
    commutator = k.boundary_commutator()
    return all(commutator.block(j) == phi.block(j) for j in range(phi.period))


def random_chain_map(rng: random.Random, source: GradedComplex, target: GradedComplex, degree: int) -> ChainMap:
    """A uniformly random chain map of the given degree."""
    operator, offsets = _commutator_operator(source, target, degree)
    basis = kernel(operator).to_dense()
    weights = np.array([rng.randint(0, 1) for _ in range(basis.shape[1])], dtype=np.int64)
    vector = (basis.astype(np.int64) @ weights) & 1 if basis.shape[1] else np.zeros(basis.shape[0], dtype=np.int64)
    return _unvectorize(vector.astype(np.uint8), source, target, degree, offsets)


def random_map(rng: random.Random, source: GradedComplex, target: GradedComplex, degree: int) -> ChainMap:
    """A uniformly random graded map, not necessarily a chain map."""
    blocks = {
        k: BitMatrix.from_dense([[rng.randint(0, 1) for _ in range(source.dim(k))]
                                 for _ in range(target.dim(k + degree))])
        if target.dim(k + degree) and source.dim(k) else BitMatrix.zeros(target.dim(k + degree), source.dim(k))
        for k in range(source.period)
    }
    return ChainMap.create(source, target, degree, blocks)
