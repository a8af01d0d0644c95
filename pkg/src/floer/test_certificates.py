import json
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from src.algebra.ip_module import IPMorphismMeta, Slack
from src.errors import ManifestError, ValidationError
from src.floer.certificates import (
    CertificateStep, CyclicSurgery, certify_chain, diffeomorphism_steps, gap_text, load_certificate,
    parse_certificate, surgery_cycle, surgery_label, surgery_ladder,
)

DATA = Path(__file__).resolve().parents[2] / "data"

EVIDENCE = {"injectivity": "given", "nonvanishing": "given"}


def step(source, target, degree, level, strict=True, **kwargs):
    options = dict(EVIDENCE, **kwargs)
    meta = IPMorphismMeta(degree, Fraction(level), Slack.named(f"η{source}{target}", strict))
    return CertificateStep(source, target, meta, **options)


class TestSurgeryCertificates(unittest.TestCase):

    def test_plus_minus_one_gap(self):
        """Test: the ±1 family map gives ℓ(S³₋₁) < ℓ(S³₁) − 1/8."""
        certificate = load_certificate(DATA / "certify_pm1.json")
        self.assertEqual(certificate.strict_count, 1)
        cumulative = certificate.cumulative
        self.assertEqual(cumulative.constant, Fraction(-1, 8))
        self.assertEqual(str(cumulative), "ℓ(S3_-1(K)) < ℓ(S3_1(K)) − 1/8")
        self.assertEqual(gap_text(cumulative), "gap ≥ 1/8 (strict)")

    def test_negative_ladder(self):
        """Test: m = −5 … −1 gives four strict steps, from the larger slope down."""
        certificate = load_certificate(DATA / "certify_ladder.json")
        self.assertEqual(certificate.strict_count, 4)
        self.assertFalse(certificate.conditional)
        first = certificate.steps[0].step
        self.assertEqual((first.source, first.target), (surgery_label("K", -1), surgery_label("K", -2)))
        cumulative = certificate.cumulative
        self.assertEqual((cumulative.source, cumulative.target), ("S3_1/-1(K)", "S3_1/-5(K)"))
        self.assertEqual(cumulative.constant, 0)
        self.assertTrue(cumulative.strict)

    def test_ladder_across_zero(self):
        """Test: −2 … 2 uses one crossing step of offset −1/8 and skips m = 0."""
        steps = surgery_ladder("K", -2, 2)
        self.assertEqual(len(steps), 3)
        crossing = [s for s in steps if s.source == surgery_label("K", 1)]
        self.assertEqual(len(crossing), 1)
        self.assertEqual(crossing[0].target, surgery_label("K", -1))
        self.assertEqual(crossing[0].morphism.degree, 3)
        self.assertTrue(all("S3_1/0" not in s.source + s.target for s in steps))
        certificate = certify_chain(steps)
        self.assertEqual(certificate.cumulative.constant, Fraction(-1, 8))

    def test_positive_ladder_uses_pairs(self):
        """Test: positive steps are pair bounds and the chain sums their constants."""
        steps = surgery_ladder("K", 1, 3)
        self.assertTrue(all(s.partner is not None for s in steps))
        self.assertEqual([s.partner.degree for s in steps], [2, 2])
        certificate = certify_chain(steps)
        self.assertEqual(certificate.cumulative.constant, 0)
        self.assertTrue(certificate.cumulative.strict)
        self.assertEqual(len(certificate.cumulative.terms[0].slack.symbols), 2)

    def test_empty_range(self):
        """Test: lo > hi is rejected."""
        with self.assertRaises(ValidationError):
            surgery_ladder("K", 3, 1)

    def test_cyclic_pattern_is_contradictory(self):
        """Test: S³_{1/2}(K1) = S³_1(K2) and S³_{1/3}(K2) = S³_1(K1) close a strict zero cycle."""
        certificate = load_certificate(DATA / "certify_cyclic.json")
        self.assertTrue(certificate.contradictory)
        self.assertEqual(certificate.conclusion, "all knots unknotted branch")
        worst = certificate.cycles[0]
        self.assertEqual(worst.total, 0)
        self.assertTrue(worst.strict)
        self.assertIn(surgery_label("K2", 2), worst.nodes)

    def test_identification_alone_is_consistent(self):
        """Test: a diffeomorphism gives a zero cycle that is not strict."""
        certificate = certify_chain(diffeomorphism_steps("Y", "Y'"))
        self.assertEqual(len(certificate.cycles), 1)
        self.assertFalse(certificate.contradictory)

    def test_cycle_needs_nonzero_slopes(self):
        """Test: slope 1/0 cannot appear in a cyclic pattern."""
        with self.assertRaises(ValidationError):
            surgery_cycle([CyclicSurgery("K1", 0, 1), CyclicSurgery("K2", 2, 1)])


class TestCertificateEngine(unittest.TestCase):

    def test_composition_matches_summed_constants(self):
        """Test: the cumulative bound of a path adds the offsets of its steps."""
        steps = [step("A", "B", 3, "1/4"), step("B", "C", 0, "0", strict=False), step("C", "D", 2, "1/4")]
        certificate = certify_chain(steps)
        expected = sum((s.inequality.constant for s in certificate.steps), Fraction(0))
        self.assertEqual(certificate.cumulative.constant, expected)
        self.assertEqual(certificate.cumulative.constant, Fraction(-1, 8))
        self.assertEqual(len(certificate.cumulative.terms[0].slack.symbols), 3)
        self.assertTrue(certificate.cumulative.strict)

    def test_disconnected_steps_have_no_cumulative(self):
        """Test: steps that do not chain give no cumulative bound."""
        certificate = certify_chain([step("A", "B", 0, "0"), step("C", "D", 0, "0")])
        self.assertIsNone(certificate.cumulative)

    def test_conditional_steps_are_kept_out_of_cycles(self):
        """Test: a step without injectivity evidence is reported but never closes a cycle."""
        steps = [step("A", "B", 1, "0"), step("B", "A", 1, "0", injectivity=None)]
        certificate = certify_chain(steps)
        self.assertTrue(certificate.conditional)
        self.assertEqual(certificate.steps[1].conditions, ("no injectivity evidence",))
        self.assertEqual(certificate.cycles, [])
        self.assertFalse(certificate.contradictory)
        self.assertIn("(conditional: no injectivity evidence)", certificate.chain_text()[1])

    def test_missing_nonvanishing_drops_strictness(self):
        """Test: without evidence that ℓ is finite, strict slack only gives ≤."""
        certificate = certify_chain([step("A", "B", 0, "0", nonvanishing=None)])
        self.assertFalse(certificate.steps[0].inequality.strict)
        self.assertTrue(certificate.conditional)

    def test_tightest_parallel_edge_is_used(self):
        """Test: of two steps A → B the smaller offset closes the cycle."""
        steps = [step("A", "B", 0, "0", strict=False), step("A", "B", 1, "0", strict=False),
                 step("B", "A", 0, "0", strict=False)]
        certificate = certify_chain(steps)
        self.assertTrue(certificate.contradictory)
        self.assertEqual(certificate.cycles[0].total, Fraction(-1, 8))

    def test_parse_errors(self):
        """Test: steps need a source, and a morphism or a cobordism."""
        with self.assertRaises(ValidationError):
            parse_certificate({"steps": [{"target": "B", "morphism": {"degree": 0}}]})
        with self.assertRaises(ValidationError):
            parse_certificate({"steps": [{"source": "A", "target": "B"}]})
        with self.assertRaises(ValidationError):
            parse_certificate({})

    def test_malformed_fields_are_validation_errors(self):
        """Test: bad enum values, integers and step shapes are rejected as invalid input."""
        cobordism_step = {"source": "A", "target": "B", "cobordism": {"middle_ends": ["S2"]}}
        cases = [
            {"steps": [cobordism_step]},
            {"steps": [{"source": "A", "target": "B", "morphism": {"degree": "x"}}]},
            {"steps": [{"source": "A", "target": "B", "cobordism": {"c_squared": "bogus"}}]},
            {"steps": [5]},
            {"steps": ["source"]},
            {"ladders": [{"knot": "K", "from": "x", "to": -1}]},
            {"ladders": [7]},
            {"cycle": [{"knot": "K", "a": "x", "b": 1}]},
        ]
        for n, data in enumerate(cases):
            with self.subTest(case=n):
                with self.assertRaises(ValidationError):
                    parse_certificate(data)

    def test_flags_must_be_json_booleans(self):
        """Test: "false" as a string is not read as true."""
        cases = [
            {"morphism": {"degree": 0, "injective": "false"}},
            {"morphism": {"degree": 0, "strict": "false"}},
            {"morphism": {"degree": 0, "injective": 0}},
            {"cobordism": {"simply_connected": "false"}},
            {"cobordism": {}, "injective": "false"},
        ]
        for n, meta in enumerate(cases):
            with self.subTest(case=n):
                with self.assertRaises(ValidationError):
                    parse_certificate({"steps": [dict(source="A", target="B", **meta)]})
        steps, _ = parse_certificate({"steps": [{
            "source": "A", "target": "B", "cobordism": {"simply_connected": False}, "injective": False,
        }]})
        self.assertFalse(steps[0].morphism.slack.strict)
        self.assertFalse(steps[0].morphism.injective_all_degrees)

    def test_file_errors_cite_the_step_line(self):
        """Test: an error in the second step points at that step's line."""
        data = {"steps": [
            {"source": "A", "target": "B", "morphism": {"degree": 0}},
            {"source": "B", "target": "C", "cobordism": {"middle_ends": ["S2"]}},
        ]}
        text = json.dumps(data, indent=2)
        expected = [n for n, line in enumerate(text.splitlines(), 1) if '"source": "B"' in line][0]
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad_step.json"
            path.write_text(text, encoding="utf-8")
            with self.assertRaises(ManifestError) as cm:
                load_certificate(path)
        self.assertEqual(cm.exception.line, expected)
        self.assertIn("step #1", str(cm.exception))

    def test_parse_morphism_step(self):
        """Test: explicit morphism metadata is read with its slack symbols."""
        steps, conclusion = parse_certificate({"steps": [{
            "source": "A", "target": "B",
            "morphism": {"degree": 3, "level": "1/4", "slack": ["η"], "strict": True, "injective": True},
        }]})
        self.assertIsNone(conclusion)
        self.assertEqual(steps[0].morphism.offset, Fraction(-1, 8))
        self.assertTrue(steps[0].morphism.slack.strict)

    def test_load_missing_file(self):
        """Test: a missing file is a ManifestError naming the path."""
        with self.assertRaises(ManifestError) as cm:
            load_certificate(DATA / "no_such_certificate.json")
        self.assertIn("no_such_certificate.json", str(cm.exception))


if __name__ == "__main__":
    unittest.main()
