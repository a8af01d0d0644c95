"""
Flat-connection manifests and the IP-module of their filtered complex.

A manifest is a JSON object:
    {"name": "...",
     "generators": [{"label": "alpha", "grading": 1, "cs": "1/120"}, ...],
     "boundary": [["x", "y"], ...]}
Chern–Simons values are "p/q" strings in lowest terms, never floats. The
trivial connection is not a generator; it only fixes the lift cs(θ) = 0.
"""
import asyncio
import json
import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from src.algebra.ip_module import IPModule, ell, kappa_table
from src.algebra.persistence import PERIOD, FilteredComplex, FlatGenerator, barcode
from src.algebra.rationals import ExtendedRational, parse_rational
from src.algebra.triangle import GradedDimVector
from src.errors import ManifestError, ValidationError
from src.source_lines import locate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ManifoldData:
    name: str
    generators: Tuple[FlatGenerator, ...]
    boundary_pairs: Tuple[Tuple[str, str], ...]

    @cached_property
    def complex(self) -> FilteredComplex:
        return FilteredComplex.create(self.generators, self.boundary_pairs)


# --- Loading ---

def _parse_generator(raw: Any, index: int) -> FlatGenerator:
    if not isinstance(raw, dict):
        raise ValidationError(f"generator #{index} is not an object")
    label = raw.get('label')
    if not isinstance(label, str) or not label:
        raise ValidationError(f"generator #{index} needs a nonempty string label")
    grading = raw.get('grading')
    if not isinstance(grading, int) or isinstance(grading, bool):
        raise ValidationError(f"generator {label!r}: grading must be an integer", subject=('label', label))
    try:
        cs = parse_rational(raw.get('cs'))
    except ValidationError as e:
        raise ValidationError(f"generator {label!r}: {e}", subject=('label', label)) from e
    return FlatGenerator(label, grading, cs)


def parse_manifest(data: Any) -> ManifoldData:
    """
    Validates decoded manifest JSON.

    Raises:
        ValidationError: On structural errors, duplicate labels, boundary pairs
            violating the grading or strict-filtration rules, or d∘d ≠ 0.
    """
    if not isinstance(data, dict):
        raise ValidationError("a manifest must be a JSON object")
    name = data.get('name')
    if not isinstance(name, str) or not name.strip():
        raise ValidationError("manifest name must be a nonempty string", subject=('field', 'name'))
    raw_generators = data.get('generators', [])
    if not isinstance(raw_generators, list):
        raise ValidationError("'generators' must be an array", subject=('field', 'generators'))
    generators = tuple(_parse_generator(raw, i) for i, raw in enumerate(raw_generators))
    raw_boundary = data.get('boundary', [])
    if not isinstance(raw_boundary, list):
        raise ValidationError("'boundary' must be an array", subject=('field', 'boundary'))
    pairs: List[Tuple[str, str]] = []
    for entry in raw_boundary:
        if not (isinstance(entry, list) and len(entry) == 2 and all(isinstance(x, str) for x in entry)):
            raise ValidationError(f"boundary entry {entry!r} is not a [from, to] pair of labels",
                                  subject=('field', 'boundary'))
        pair = (entry[0], entry[1])
        if pair in pairs:
            raise ValidationError(f"boundary pair {list(pair)} is listed twice", subject=('pair',) + pair)
        pairs.append(pair)
    manifold = ManifoldData(name, generators, tuple(pairs))
    # builds and validates the filtered complex
    manifold.complex
    return manifold


def load(path: Union[str, Path]) -> ManifoldData:
    """
    Loads and validates a manifest file.

    Raises:
        ManifestError: With the line of the offending entry where it can be found.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ManifestError(f"cannot read manifest: {e}", source=str(path)) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestError(e.msg, line=e.lineno, source=str(path)) from e
    try:
        manifold = parse_manifest(data)
    except ValidationError as e:
        raise ManifestError(str(e), line=locate(text, e.subject), source=str(path)) from e
    logger.info(f"Loaded manifold '{manifold.name}' with {len(manifold.generators)} generators from {path}")
    return manifold


async def load_many(paths: Sequence[Union[str, Path]]) -> List[ManifoldData]:
    """Loads several manifests concurrently, preserving order."""
    return list(await asyncio.gather(*(asyncio.to_thread(load, p) for p in paths)))


# --- Invariants ---

def ip_module_of(m: ManifoldData, window_start: int = 0) -> IPModule:
    return IPModule(barcode(m.complex, window_start))


def ell_of(m: ManifoldData) -> ExtendedRational:
    return ell(ip_module_of(m))


def kappa_of(m: ManifoldData, window_start: int = 0) -> Dict[int, ExtendedRational]:
    return kappa_table(ip_module_of(m, window_start))


def floer_ranks(m: ManifoldData) -> GradedDimVector:
    """dim F_∞ in each degree mod 8, the input expected by the surgery rank calculus."""
    module = ip_module_of(m)
    return GradedDimVector(tuple(module.unfiltered_rank(d) for d in range(PERIOD)))
