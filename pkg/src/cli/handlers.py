"""
Command handlers for the command-line front end.

Every handler takes the parsed arguments and returns a RunReport. Handlers
never print or choose exit codes for errors; the middleware does that.
"""
import argparse
import random
from typing import Any, Dict, List, Optional

from src import archive, config
from src.algebra.ip_module import ell_minimisers, kappa_table
from src.algebra.persistence import PERIOD, barcode
from src.algebra.rationals import format_rational, parse_rational
from src.algebra.triangle import (
    GradedDimVector, TriangleData, TriangleVerdict, degree_shift_bridge, detect_triangle,
    euler_characteristic, load_triangle, random_triangle, surgery_ranks, surgery_summands,
)
from src.cli.reports import EXIT_VERIFICATION, RunReport, describe_input
from src.errors import ValidationError
from src.floer import certificates, cobordism, filtered_floer
from src.knots import alexander

# --- Manifest Commands ---


async def cmd_ell(args: argparse.Namespace) -> RunReport:
    """κ over the window and ℓ of each manifest, with the degrees attaining the infimum."""
    manifolds = await filtered_floer.load_many(args.manifests)
    report = RunReport(command='ell', inputs=[describe_input(p) for p in args.manifests])
    values = []
    for m in manifolds:
        module = filtered_floer.ip_module_of(m, args.window_start)
        table = kappa_table(module)
        value = filtered_floer.ell_of(m)
        minimisers = ell_minimisers(module)
        values.append({
            'name': m.name,
            'ell': value.to_json(),
            'attained_in': minimisers,
            'kappa': {str(d): v.to_json() for d, v in table.items()},
        })
        attained = f"  (attained in degrees {', '.join(map(str, minimisers))})" if minimisers else ""
        report.lines.append(f"ℓ({m.name}) = {value}{attained}")
        report.lines.append("  κ: " + ", ".join(f"κ({d}) = {v}" for d, v in table.items()))
    report.results['manifolds'] = values
    report.citations.append("ℓ = inf over d of κ(d) − d/8, computed over one window")
    return report


async def cmd_kappa(args: argparse.Namespace) -> RunReport:
    m = filtered_floer.load(args.manifest)
    table = filtered_floer.kappa_of(m, args.window_start)
    report = RunReport(command='kappa', inputs=[describe_input(args.manifest)])
    report.results = {
        'name': m.name,
        'window': [args.window_start, args.window_start + PERIOD - 1],
        'kappa': {str(d): v.to_json() for d, v in table.items()},
    }
    report.lines.append(f"κ for {m.name}, degrees {args.window_start}..{args.window_start + PERIOD - 1}:")
    report.lines.extend(f"  κ({d}) = {v}" for d, v in table.items())
    report.citations.append("κ(d + 8) = κ(d) + 1")
    return report


async def cmd_barcode(args: argparse.Namespace) -> RunReport:
    m = filtered_floer.load(args.manifest)
    bars = barcode(m.complex, args.window_start)
    report = RunReport(command='barcode', inputs=[describe_input(args.manifest)])
    report.results = {'name': m.name, 'barcode': bars.to_json()}
    report.lines.append(f"barcode of {m.name}, degrees {args.window_start}..{args.window_start + PERIOD - 1}:")
    if bars.is_empty():
        report.lines.append("  (empty: the module is zero)")
    report.lines.extend(f"  {bar}" for bar in bars.bars)
    return report


# --- Triangle Commands ---

def _verdict_lines(verdict: TriangleVerdict) -> List[str]:
    lines = []
    for v in verdict.vertices:
        state = "quasi-isomorphism" if v.quasi_isomorphism else "NOT a quasi-isomorphism"
        lines.append(f"  (f_{v.vertex}, g_{v.vertex}): C_{v.vertex} → Cone(f_{(v.vertex - 1) % 3}) is a {state}")
        lines.extend(f"    {note}" for note in v.notes)
    exact = "exact" if verdict.exactness.exact else "NOT exact"
    lines.append(f"  H(C_0) → H(C_2) → H(C_1) → H(C_0) is {exact}")
    lines.extend(f"    {forced}" for forced in verdict.exactness.forced_isomorphisms)
    if verdict.homotopy_route:
        lines.append(f"  q ≃ id checked by: {verdict.homotopy_route}")
    return lines


def _verdict_json(verdict: TriangleVerdict) -> Dict[str, Any]:
    return {
        'detected': verdict.detected,
        'exact': verdict.exactness.exact,
        'homotopy_route': verdict.homotopy_route,
        'f_ranks': {str(i): r for i, r in verdict.f_ranks.items()},
        'vertices': [
            {'vertex': v.vertex, 'quasi_isomorphism': v.quasi_isomorphism,
             'homology': v.homology, 'cone_homology': v.cone_homology, 'notes': v.notes}
            for v in verdict.vertices
        ],
    }


async def cmd_triangle_check(args: argparse.Namespace) -> RunReport:
    """
    Checks one triangle file, or `--generate N` random triangles from `--seed`.

    A triangle that is not detected makes the report a verification failure.
    """
    report = RunReport(command='triangle-check')
    if args.path:
        report.inputs.append(describe_input(args.path))
        triangles: List[TriangleData] = [load_triangle(args.path)]
        names = [str(args.path)]
    elif args.generate:
        rng = random.Random(args.seed)
        triangles = [random_triangle(rng, args.period, args.max_dim) for _ in range(args.generate)]
        names = [f"random #{n} (seed {args.seed})" for n in range(args.generate)]
    else:
        raise ValidationError("triangle-check needs a triangle file or --generate N")

    outcomes = []
    for name, t in zip(names, triangles):
        verdict = detect_triangle(t)
        outcomes.append(verdict.detected and verdict.exactness.exact)
        if len(triangles) == 1:
            report.results = _verdict_json(verdict)
            report.lines.append(f"{name}: {'triangle detected' if verdict.detected else 'triangle NOT detected'}")
            report.lines.extend(_verdict_lines(verdict))
    if len(triangles) > 1:
        passed = sum(outcomes)
        report.results = {'checked': len(triangles), 'detected': passed, 'seed': args.seed}
        report.lines.append(f"{passed}/{len(triangles)} random triangles detected")
    if not all(outcomes):
        report.exit_code = EXIT_VERIFICATION
    report.citations.append("(f_i, g_i): C_i → Cone(f_{i−1}) is a quasi-isomorphism when q_i ≃ id")
    return report


async def cmd_surgery_ranks(args: argparse.Namespace) -> RunReport:
    """dim I_*(S³_{1/n}(K)) from the ranks of I_*(S³_{sign n}(K))."""
    report = RunReport(command='surgery-ranks')
    if args.manifest:
        report.inputs.append(describe_input(args.manifest))
        base = filtered_floer.floer_ranks(filtered_floer.load(args.manifest))
    elif args.dims:
        base = GradedDimVector.parse(args.dims)
    else:
        raise ValidationError("surgery-ranks needs --dims d0,...,d7 or --manifest")
    summands = surgery_summands(args.n, base)
    total = surgery_ranks(args.n, base)
    report.results = {
        'n': args.n,
        'base': base.to_json(),
        'summands': [s.to_json() for s in summands],
        'ranks': total.to_json(),
        'total': total.total,
        'euler_characteristic': euler_characteristic(total),
    }
    report.lines.append(f"base I_*(S³_{'+1' if args.n > 0 else '-1'}): {base}")
    report.lines.extend(f"  summand {i}: {s}" for i, s in enumerate(summands))
    report.lines.append(f"I_*(S³_1/{args.n}): {total}  (total {total.total})")
    if args.n == -1:
        bridge = degree_shift_bridge(base)
        report.results['plus_one_mod4'] = bridge.to_json()
        report.lines.append(f"I_*(S³_+1) on ℤ/4: {bridge}")
    report.citations.append("surgery exact triangles with a vanishing third term")
    return report


# --- Knot and Certificate Commands ---

async def cmd_alexander(args: argparse.Namespace) -> RunReport:
    report = RunReport(command='alexander')
    solution = alexander.cosmetic_solve()
    constraints = solution.constraints
    report.lines.append("Δ(t) = a(t² + t⁻²) + b(t + t⁻¹) + c")
    report.lines.append(f"  Δ″(1) = {constraints['second_derivative']} = 0")
    report.lines.append(f"  Δ(1) = {constraints['value_at_one']} = ±1")
    report.lines.append(f"  Δ̃″(1) = {constraints['cover']} = 0")
    branches = []
    for branch in solution.branches:
        family = ", ".join(f"{k} = {v}" for k, v in sorted(branch.family.items(), key=lambda kv: str(kv[0])))
        report.lines.append(f"  Δ(1) = {branch.sign:+d}: {family}; Δ̃″(1) = {branch.cover_on_family}")
        branches.append({
            'sign': branch.sign,
            'family': {str(k): str(v) for k, v in branch.family.items()},
            'cover_on_family': str(branch.cover_on_family),
            'solutions': [list(s) for s in branch.solutions],
        })
    report.lines.append(f"solutions: {solution.solutions}")
    report.results = {
        'constraints': {k: str(v) for k, v in constraints.items()},
        'branches': branches,
        'solutions': [list(s) for s in solution.solutions],
        'canonical': list(solution.canonical.as_tuple()),
        'conclusion': solution.conclusion,
    }
    bound = args.search_bound if args.search_bound is not None else config.alexander_search_bound()
    if bound > 0:
        found = alexander.exhaustive_search(bound)
        report.results['search'] = {'bound': bound, 'solutions': [list(s) for s in found]}
        agrees = sorted(found) == solution.solutions
        report.lines.append(f"exhaustive search |a|,|b|,|c| ≤ {bound}: {found}{'' if agrees else ' (DISAGREES)'}")
        if not agrees:
            report.exit_code = EXIT_VERIFICATION
    if args.poly:
        poly = alexander.parse_polynomial(args.poly)
        report.results['polynomial'] = {
            'terms': poly.to_json(),
            'second_derivative_at_one': alexander.second_derivative_at_one(poly),
            'determinant': alexander.determinant(poly),
            'branched_cover': alexander.branched_cover_poly(poly).to_json() if poly.is_symmetric() else None,
        }
        report.lines.append(f"Δ = {poly}: Δ″(1) = {alexander.second_derivative_at_one(poly)}, "
                            f"det = {alexander.determinant(poly)}")
        if poly.is_symmetric():
            report.lines.append(f"  Δ̃ = {alexander.branched_cover_poly(poly)}")
    report.lines.append(solution.conclusion)
    report.citations.extend([
        "Δ″(1) = 0 for a cosmetic pair",
        "±2 surgery lifts to ±1 surgery in the branched double cover",
    ])
    return report


async def cmd_certify(args: argparse.Namespace) -> RunReport:
    certificate = certificates.load_certificate(args.certificate)
    report = RunReport(command='certify', inputs=[describe_input(args.certificate)])
    report.lines.extend(certificate.chain_text())
    steps = [
        {
            'source': s.step.source, 'target': s.step.target,
            'relation': s.inequality.relation, 'constant': format_rational(s.inequality.constant),
            'exact': s.inequality.exact_text(), 'citation': s.step.citation,
            'conditions': list(s.conditions),
        }
        for s in certificate.steps
    ]
    report.results = {'steps': steps, 'strict_steps': certificate.strict_count,
                      'conditional': certificate.conditional}
    if certificate.cumulative is not None:
        cumulative = certificate.cumulative
        report.lines.append(f"cumulative: {cumulative}  ({cumulative.exact_text()})")
        report.results['cumulative'] = {'text': str(cumulative), 'constant': format_rational(cumulative.constant),
                                        'strict': cumulative.strict}
        if cumulative.constant < 0:
            gap = certificates.gap_text(cumulative)
            report.lines.append(gap)
            report.results['gap'] = gap
    cycles = [{'nodes': list(c.nodes), 'total': format_rational(c.total), 'strict': c.strict,
               'contradictory': c.contradictory} for c in certificate.cycles]
    report.results['cycles'] = cycles
    report.results['contradictory'] = certificate.contradictory
    if certificate.contradictory:
        conclusion = certificate.conclusion or "the assumed nonvanishing fails"
        report.lines.append(f"contradiction: {conclusion}")
        report.results['conclusion'] = conclusion
    citations = sorted({s.step.citation for s in certificate.steps if s.step.citation})
    report.citations.extend(citations)
    return report


# --- Cobordism Commands ---

async def cmd_cobordism(args: argparse.Namespace) -> RunReport:
    report = RunReport(command='cobordism')
    c_squared = parse_rational(args.c_squared, strict=False)
    topology = cobordism.CobordismTopology(
        b1=args.b1, bplus=args.bplus, c_squared=c_squared,
        simply_connected=not args.not_simply_connected, family_dim=args.family_dim,
        middle_ends=tuple(cobordism.MiddleEnd(e) for e in args.middle_end or ()),
        name=args.name,
    )
    if topology.bplus == 0:
        meta = cobordism.degree_level(topology)
        report.results['degree'] = meta.degree
        report.results['level'] = meta.level_text()
        report.results['slack'] = meta.slack.constraint()
        report.lines.append(f"{args.name}: D = {meta.degree}, L = {meta.level_text()}, {meta.slack.constraint()}")
    if args.cs:
        cs_from, cs_to = (parse_rational(v, strict=False) for v in args.cs)
        energy = cobordism.energy_relation(c_squared, cs_from, cs_to)
        report.results['energy'] = format_rational(energy)
        report.lines.append(f"E = −c²/4 + cs − cs′ = {format_rational(energy)}")
    if args.index:
        total = cobordism.index_additivity(args.index[0], c_squared, args.index[1])
        report.results['index_additivity'] = total
        report.lines.append(f"i(α) + 3 + i(W) − i(α′) = {total}")
    if args.e8 is not None:
        ends = [cobordism.FlatLimitType(e) for e in args.ends or ()]
        index = cobordism.asd_index(parse_rational(args.e8, strict=False), topology.bplus, ends)
        report.results['asd_index'] = format_rational(index)
        report.lines.append(f"i(A) = 8E − 3(1 + b⁺) + ½Σ(3 − h⁰) = {format_rational(index)}")
    if args.reducibles is not None:
        limit = args.reducibles if args.reducibles > 0 else config.reducible_search_limit()
        found = cobordism.reducibles_on_N(n_max=limit)
        least = cobordism.minimal_reducible(found)
        report.results['reducibles'] = [
            {'n': r.n, 'e8': format_rational(r.e8), 'index': format_rational(r.index)} for r in found
        ]
        report.results['minimal'] = least.n if least else None
        report.lines.extend(f"  n = {r.n}: 8E = {format_rational(r.e8)}, index {format_rational(r.index)}" for r in found)
        if least:
            report.lines.append(f"unique minimal reducible: n = {least.n}, index {format_rational(least.index)}")
    if args.scenario:
        params: Dict[str, Any] = {'bplus': topology.bplus}
        if args.gap is not None:
            params['gap'] = args.gap
        bound = cobordism.broken_index_bound(args.scenario, **params)
        report.results['scenario'] = {'name': bound.scenario, 'components': list(bound.components),
                                      'bound': bound.bound}
        report.lines.append(f"{bound.scenario}: {bound}")
    if not report.lines:
        raise ValidationError("nothing to compute: b⁺ ≠ 0 and no other quantity was requested")
    return report


# --- Archive Commands ---

async def cmd_history(args: argparse.Namespace) -> RunReport:
    path = args.archive or config.ARCHIVE_PATH
    if not path:
        raise ValidationError("no archive configured; pass --archive or set ARCHIVE_PATH")
    report = RunReport(command='history')
    if args.show is not None:
        stored = await archive.get_report(path, args.show)
        if stored is None:
            raise ValidationError(f"no report #{args.show} in {path}")
        report.results = {'report': stored}
        report.lines.append(f"report #{args.show} ({stored.get('command')}):")
        report.lines.extend(f"  {k}: {v}" for k, v in sorted(stored.get('results', {}).items()))
        return report
    rows = await archive.list_reports(path, args.limit, args.filter)
    report.results = {'reports': rows}
    if not rows:
        report.lines.append("no archived reports")
    report.lines.extend(f"#{r['id']}  {r['created_at']}  {r['command']:<15} {r['digest'][:12]}" for r in rows)
    return report


def window_from_text(text: Optional[str]) -> int:
    """'a..b' with b = a + 7, returning a; None gives the configured default."""
    if text is None:
        return config.window_start()
    try:
        start, end = (int(part) for part in text.split('..'))
    except ValueError:
        raise ValidationError(f"--window expects 'a..b', got {text!r}") from None
    if end - start != PERIOD - 1:
        raise ValidationError(f"--window must span exactly {PERIOD} degrees, got {text!r}")
    return start
