"""
The ℓ-inequality certificate engine.

A certificate is a list of steps, each a morphism (or a jointly injective
pair of morphisms) from a source manifold A to a target B, giving
ℓ(B) ≤ ℓ(A) + offset with symbolic slack. Steps are the edges of a
directed graph; a chain that closes on itself with a negative total
offset, or a zero total with a strict step, is contradictory.

Injectivity and finiteness of ℓ are evidence supplied by the user. A
step lacking either is kept, but marked conditional.
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from src.algebra.ip_module import (
    BoundTerm, EllInequality, IPMorphismMeta, Slack, compose, ell_bound_pair, ell_bound_single,
)
from src.algebra.rationals import format_rational, parse_rational
from src.errors import ManifestError, ValidationError
from src.source_lines import locate
from src.floer.cobordism import CobordismTopology, MiddleEnd, degree_level

logger = logging.getLogger(__name__)

NONTRIVIAL_KNOT = "knot assumed nontrivial, so instanton homology is nonzero"
EXACT_TRIANGLE = "exact triangle with vanishing third term"


@dataclass(frozen=True)
class CertificateStep:
    """
    One step A → B.

    `partner` turns the step into a pair bound; `injectivity` and
    `nonvanishing` are evidence tags (None when missing).
    """
    source: str
    target: str
    morphism: IPMorphismMeta
    injectivity: Optional[str] = None
    nonvanishing: Optional[str] = None
    citation: str = ""
    partner: Optional[IPMorphismMeta] = None


@dataclass(frozen=True)
class CertifiedStep:
    step: CertificateStep
    inequality: EllInequality
    conditions: Tuple[str, ...] = ()

    @property
    def conditional(self) -> bool:
        return bool(self.conditions)


@dataclass(frozen=True)
class CertificateCycle:
    nodes: Tuple[str, ...]
    total: Fraction
    strict: bool

    @property
    def contradictory(self) -> bool:
        return self.total < 0 or (self.total == 0 and self.strict)


@dataclass
class InequalityCertificate:
    steps: List[CertifiedStep]
    cumulative: Optional[EllInequality] = None
    cycles: List[CertificateCycle] = field(default_factory=list)
    conclusion: Optional[str] = None

    @property
    def contradictory(self) -> bool:
        return any(c.contradictory for c in self.cycles)

    @property
    def conditional(self) -> bool:
        return any(s.conditional for s in self.steps)

    @property
    def strict_count(self) -> int:
        return sum(1 for s in self.steps if s.inequality.strict)

    def chain_text(self) -> List[str]:
        lines = []
        for s in self.steps:
            tag = f"  [{s.step.citation}]" if s.step.citation else ""
            suffix = f"  (conditional: {'; '.join(s.conditions)})" if s.conditional else ""
            lines.append(f"{s.inequality}{tag}{suffix}")
        return lines


# --- Certification ---

def _certify_step(step: CertificateStep) -> CertifiedStep:
    conditions = []
    if step.injectivity is None:
        conditions.append("no injectivity evidence")
    if step.nonvanishing is None:
        conditions.append("no evidence that ℓ is finite")
    # a step without evidence is still bounded, under the assumption it lacks
    finite = step.nonvanishing is not None
    if step.partner is None:
        inequality = ell_bound_single(
            _assume_injective(step.morphism), finite=finite,
            target_label=step.target, source_label=step.source,
        )
    else:
        inequality = ell_bound_pair(
            step.morphism, step.partner, jointly_injective=True, finite=finite,
            target_label=step.target, source_label=step.source,
        )
    return CertifiedStep(step, inequality, tuple(conditions))


def _assume_injective(f: IPMorphismMeta) -> IPMorphismMeta:
    return IPMorphismMeta(f.degree, f.level_base, f.slack, True)


def _cumulative(certified: Sequence[CertifiedStep]) -> Optional[EllInequality]:
    """The bound from the first source to the last target when the steps form a path."""
    if not certified:
        return None
    for before, after in zip(certified, certified[1:]):
        if before.step.target != after.step.source:
            return None
    if all(s.step.partner is None for s in certified):
        total = certified[0].step.morphism
        for s in certified[1:]:
            total = compose(total, s.step.morphism)
        constant, slack = total.offset, total.slack
    else:
        constant = sum((s.inequality.constant for s in certified), Fraction(0))
        slack = Slack()
        for s in certified:
            top = [t for t in s.inequality.terms if t.offset == s.inequality.constant]
            slack = slack + top[0].slack
    strict = any(s.inequality.strict for s in certified) and all(
        s.step.nonvanishing is not None for s in certified
    )
    return EllInequality(
        target=certified[-1].step.target,
        source=certified[0].step.source,
        terms=(BoundTerm(constant, slack),),
        strict=strict,
    )


def _cycles(certified: Sequence[CertifiedStep]) -> List[CertificateCycle]:
    """Directed cycles through unconditional steps, keeping the tightest edge between two manifolds."""
    graph = nx.DiGraph()
    for s in certified:
        if s.conditional:
            continue
        u, v = s.step.source, s.step.target
        weight, strict = s.inequality.constant, s.inequality.strict
        if graph.has_edge(u, v):
            old = graph[u][v]
            if (old['weight'], not old['strict']) <= (weight, not strict):
                continue
        graph.add_edge(u, v, weight=weight, strict=strict)
    cycles = []
    for nodes in nx.simple_cycles(graph):
        edges = list(zip(nodes, nodes[1:] + nodes[:1]))
        total = sum((graph[u][v]['weight'] for u, v in edges), Fraction(0))
        strict = any(graph[u][v]['strict'] for u, v in edges)
        cycles.append(CertificateCycle(tuple(nodes), total, strict))
    cycles.sort(key=lambda c: (c.total, not c.strict, c.nodes))
    return cycles


def certify_chain(steps: Sequence[CertificateStep], conclusion: Optional[str] = None) -> InequalityCertificate:
    """
    Certifies every step, accumulates the bound along a path, and searches
    the steps for contradictory cycles.
    """
    certified = [_certify_step(step) for step in steps]
    certificate = InequalityCertificate(
        steps=certified,
        cumulative=_cumulative(certified),
        cycles=_cycles(certified),
        conclusion=conclusion,
    )
    logger.info(
        f"Certificate built: {len(certified)} steps, {certificate.strict_count} strict, "
        f"{len(certificate.cycles)} cycles, contradictory={certificate.contradictory}"
    )
    return certificate


# --- Surgery Steps ---

def surgery_label(knot: str, m: int) -> str:
    return f"S3_1/{m}({knot})"


def _negative_step(knot: str, m: int) -> CertificateStep:
    # S³_{1/(m+1)} → S³_{1/m} through a negative definite 2-handle cobordism, m + 1 ≤ −1
    meta = degree_level(CobordismTopology(c_squared=Fraction(0), name=f"{knot},{m}"))
    return CertificateStep(
        source=surgery_label(knot, m + 1), target=surgery_label(knot, m), morphism=meta,
        injectivity=EXACT_TRIANGLE, nonvanishing=NONTRIVIAL_KNOT, citation="negative surgery ladder",
    )


def _crossing_step(knot: str) -> CertificateStep:
    # S³_1 → S³_{-1}: one-parameter family with c² = −1, degree 3, level 1/4 − η
    meta = degree_level(CobordismTopology(c_squared=Fraction(-1), family_dim=1, name=knot))
    return CertificateStep(
        source=surgery_label(knot, 1), target=surgery_label(knot, -1), morphism=meta,
        injectivity=EXACT_TRIANGLE, nonvanishing=NONTRIVIAL_KNOT, citation="±1 surgery family map",
    )


def _positive_step(knot: str, m: int) -> CertificateStep:
    # S³_{1/(m+1)} → S³_{1/m}, m ≥ 1: jointly injective pair W_* ⊕ (W, c)_*
    plain = degree_level(CobordismTopology(c_squared=Fraction(0), name=f"{knot},{m}"))
    twisted = degree_level(CobordismTopology(c_squared=Fraction(-1), name=f"{knot},{m},c"))
    return CertificateStep(
        source=surgery_label(knot, m + 1), target=surgery_label(knot, m), morphism=plain,
        injectivity="distance-two exact triangle", nonvanishing=NONTRIVIAL_KNOT,
        citation="positive surgery ladder", partner=twisted,
    )


def surgery_ladder(knot: str, lo: int, hi: int) -> List[CertificateStep]:
    """
    Steps showing ℓ(S³_{1/m}(K)) increases with m over lo ≤ m ≤ hi, m ≠ 0.

    Each step goes from m' to the next smaller nonzero m, so the chain runs
    from S³_{1/hi} down to S³_{1/lo}.
    """
    if lo > hi:
        raise ValidationError(f"empty surgery range {lo}..{hi}")
    slopes = [m for m in range(lo, hi + 1) if m != 0]
    steps = []
    for smaller, larger in reversed(list(zip(slopes, slopes[1:]))):
        if smaller >= 1:
            steps.append(_positive_step(knot, smaller))
        elif larger <= -1:
            steps.append(_negative_step(knot, smaller))
        else:
            steps.append(_crossing_step(knot))
    return steps


def diffeomorphism_steps(a: str, b: str, evidence: str = "orientation-preserving diffeomorphism",
                         nonvanishing: Optional[str] = NONTRIVIAL_KNOT) -> List[CertificateStep]:
    """Degree 0, level 0 steps in both directions: ℓ(a) = ℓ(b)."""
    identity = IPMorphismMeta(0, Fraction(0), Slack(), injective_all_degrees=True)
    return [
        CertificateStep(a, b, identity, evidence, nonvanishing, citation="identification"),
        CertificateStep(b, a, identity, evidence, nonvanishing, citation="identification"),
    ]


@dataclass(frozen=True)
class CyclicSurgery:
    """S³_{1/a}(knot) is identified with S³_{1/b}(next knot)."""
    knot: str
    a: int
    b: int


def surgery_cycle(pattern: Sequence[CyclicSurgery]) -> List[CertificateStep]:
    """
    Steps for S³_{1/a_i}(K_i) = S³_{1/b_{i+1}}(K_{i+1}), indices mod the pattern
    length, plus each knot's ladder between its two slopes b_i and a_i.
    """
    if not pattern:
        raise ValidationError("a cyclic surgery pattern needs at least one knot")
    steps: List[CertificateStep] = []
    for i, entry in enumerate(pattern):
        following = pattern[(i + 1) % len(pattern)]
        if 0 in (entry.a, following.b):
            raise ValidationError("surgery slopes 1/m need m ≠ 0")
        steps.extend(diffeomorphism_steps(surgery_label(entry.knot, entry.a), surgery_label(following.knot, following.b)))
    for i, entry in enumerate(pattern):
        lo, hi = sorted((entry.a, entry.b))
        if lo != hi:
            steps.extend(surgery_ladder(entry.knot, lo, hi))
    return steps


# --- Loading ---

def _flag(raw: Mapping[str, Any], key: str, default: bool, where: str) -> bool:
    value = raw.get(key, default)
    if not isinstance(value, bool):
        raise ValidationError(f"{where}: '{key}' must be true or false, got {value!r}")
    return value


def _parse_meta(raw: Mapping[str, Any], where: str) -> IPMorphismMeta:
    if 'cobordism' in raw:
        c = raw['cobordism']
        topology = CobordismTopology(
            b1=int(c.get('b1', 0)),
            bplus=int(c.get('bplus', 0)),
            c_squared=parse_rational(c.get('c_squared', '0/1')),
            simply_connected=_flag(c, 'simply_connected', True, where),
            family_dim=int(c.get('family_dim', 0)),
            middle_ends=tuple(MiddleEnd(e) for e in c.get('middle_ends', [])),
            name=str(c.get('name', where)),
        )
        meta = degree_level(topology)
        return IPMorphismMeta(meta.degree, meta.level_base, meta.slack, _flag(raw, 'injective', False, where))
    if 'morphism' in raw:
        m = raw['morphism']
        slack_symbols = tuple(str(s) for s in m.get('slack', []))
        return IPMorphismMeta(
            degree=int(m['degree']),
            level_base=parse_rational(m.get('level', '0/1')),
            slack=Slack(slack_symbols, _flag(m, 'strict', False, where)),
            injective_all_degrees=_flag(m, 'injective', False, where),
        )
    raise ValidationError(f"{where}: a step needs a 'morphism' or a 'cobordism'")


def parse_certificate(data: Mapping[str, Any]) -> Tuple[List[CertificateStep], Optional[str]]:
    """
    Reads certificate steps from JSON:
        {"conclusion": ..., "steps": [...], "ladders": [{"knot", "from", "to"}],
         "cycle": [{"knot", "a", "b"}]}

    Raises:
        ValidationError: With a subject locating the failing step, or the
            'ladders' / 'cycle' field.
    """
    if not isinstance(data, dict):
        raise ValidationError("a certificate file must be a JSON object")
    steps: List[CertificateStep] = []
    where, subject = "steps", ('field', 'steps')
    try:
        for n, raw in enumerate(data.get('steps', [])):
            where, subject = f"step #{n}", ('field', 'steps')
            if not isinstance(raw, dict):
                raise ValidationError(f"{where} is not an object")
            if 'source' in raw:
                subject = ('entry', 'source', n)
            partner = None
            if 'partner' in raw:
                partner = _parse_meta(raw['partner'], where + " partner")
            steps.append(CertificateStep(
                source=str(raw['source']),
                target=str(raw['target']),
                morphism=_parse_meta(raw, where),
                injectivity=raw.get('injectivity'),
                nonvanishing=raw.get('nonvanishing'),
                citation=str(raw.get('citation', '')),
                partner=partner,
            ))
        where, subject = "ladders", ('field', 'ladders')
        for raw in data.get('ladders', []):
            steps.extend(surgery_ladder(str(raw['knot']), int(raw['from']), int(raw['to'])))
        if data.get('cycle'):
            where, subject = "cycle", ('field', 'cycle')
            steps.extend(surgery_cycle([CyclicSurgery(str(r['knot']), int(r['a']), int(r['b'])) for r in data['cycle']]))
    except ValidationError as e:
        e.subject = subject
        raise
    except (KeyError, TypeError, AttributeError, ValueError, IndexError) as e:
        raise ValidationError(f"malformed certificate, {where}: {type(e).__name__}: {e}", subject=subject) from e
    if not steps:
        raise ValidationError("certificate has no steps")
    return steps, data.get('conclusion')


def load_certificate(path: Union[str, Path]) -> InequalityCertificate:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ManifestError(f"cannot read certificate: {e}", source=str(path)) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestError(e.msg, line=e.lineno, source=str(path)) from e
    try:
        steps, conclusion = parse_certificate(data)
    except ValidationError as e:
        raise ManifestError(str(e), line=locate(text, e.subject), source=str(path)) from e
    return certify_chain(steps, conclusion)


def gap_text(inequality: EllInequality) -> str:
    """'gap ≥ 1/8 (strict)' for ℓ(B) < ℓ(A) − 1/8."""
    gap = -inequality.constant
    qualifier = "strict" if inequality.strict else "non-strict"
    return f"gap ≥ {format_rational(gap)} ({qualifier})"
