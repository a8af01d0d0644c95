import json
import random
import tempfile
import unittest
from pathlib import Path

from src.algebra.gf2_chain import BitMatrix
from src.algebra.triangle import (
    GradedDimVector, HomologyMap, degree_shift_bridge, detect_triangle, euler_characteristic, exactness_check,
    load_triangle, parse_triangle, random_triangle, surgery_ranks, surgery_summands, verify_identities,
)
from src.errors import ManifestError, ValidationError, VerificationError

DATA = Path(__file__).resolve().parents[2] / "data"


def notes_of(verdict):
    return [note for vertex in verdict.vertices for note in vertex.notes]


class TestTriangleDetection(unittest.TestCase):

    def test_random_triangles_are_detected(self):
        """Test: generated data satisfying the identities is always an exact triangle."""
        rng = random.Random(99)
        for trial in range(200):
            t = random_triangle(rng, period=rng.choice((4, 8)), max_dim=24)
            self.assertLessEqual(t.total_dim, 24)
            verdict = detect_triangle(t)
            self.assertTrue(verdict.detected, msg=f"trial {trial}")
            self.assertTrue(verdict.exactness.exact, msg=f"trial {trial}: {verdict.exactness.failures}")
            self.assertEqual(verdict.homotopy_route, "solved")

    def test_zero_vertex_forces_isomorphism(self):
        """Test: with C_0 = 0 the map g_1 is an isomorphism on homology."""
        verdict = detect_triangle(load_triangle(DATA / "triangle_zero_c0.json"))
        self.assertTrue(verdict.detected)
        self.assertIn("g_1 induces an isomorphism H(C_1) → H(C_2)", notes_of(verdict))
        self.assertEqual(sum(verdict.vertices[1].homology), sum(verdict.vertices[2].homology))

    def test_identity_triangle_has_acyclic_vertex(self):
        """Test: C_0 →id C_2 makes Cone(f_0) acyclic, hence H(C_1) = 0."""
        verdict = detect_triangle(load_triangle(DATA / "triangle_identity.json"))
        self.assertTrue(verdict.detected)
        self.assertIn("Cone(f_0) is acyclic, so H(C_1) = 0", notes_of(verdict))
        self.assertEqual(verdict.vertices[1].homology, [0, 0, 0, 0])

    def test_broken_identity_is_a_verification_error(self):
        """Test: dropping g_0 breaks d g + f f + g d = 0 at i = 0."""
        data = json.loads((DATA / "triangle_identity.json").read_text(encoding="utf-8"))
        data["g"][0] = None
        t = parse_triangle(data)
        report = verify_identities(t)
        self.assertFalse(report.holds)
        self.assertEqual((report.first_failure.identity, report.first_failure.vertex), ("d g + f f + g d = 0", 0))
        with self.assertRaises(VerificationError):
            detect_triangle(t)

    def test_degree_mismatch_rejected(self):
        """Test: f degrees that do not sum to −1 are invalid."""
        data = json.loads((DATA / "triangle_identity.json").read_text(encoding="utf-8"))
        data["f"][2]["degree"] = 0
        data["f"][2]["blocks"] = {}
        with self.assertRaises(ValidationError):
            parse_triangle(data)

    def test_malformed_and_missing_files(self):
        """Test: missing complexes are invalid and an unreadable file names its path."""
        with self.assertRaises(ValidationError):
            parse_triangle({"period": 4, "complexes": []})
        with self.assertRaises(ManifestError) as cm:
            load_triangle(DATA / "does_not_exist.json")
        self.assertIn("does_not_exist.json", str(cm.exception))

    def test_malformed_parts_are_validation_errors(self):
        """Test: broken complexes, maps and keys name the part that failed."""
        def broken(change):
            data = json.loads((DATA / "triangle_identity.json").read_text(encoding="utf-8"))
            change(data)
            return data

        cases = {
            "complexes": [
                lambda d: d["complexes"].__setitem__(1, 5),
                lambda d: d["complexes"][0].__setitem__("dims", {"x": 1}),
                lambda d: d["complexes"][0].__setitem__("dims", [1]),
            ],
            "f": [
                lambda d: d.__setitem__("f", d["f"][:2]),
                lambda d: d["f"][0].__setitem__("degree", "one"),
                lambda d: d["f"][1].__setitem__("blocks", {"0": [[0, 0, 0]]}),
            ],
            "g": [lambda d: d["g"].__setitem__(1, "g")],
            "q": [lambda d: d.__setitem__("q", [None])],
        }
        for part, changes in cases.items():
            for n, change in enumerate(changes):
                with self.subTest(part=part, case=n):
                    with self.assertRaises(ValidationError) as cm:
                        parse_triangle(broken(change))
                    self.assertEqual(cm.exception.subject, ("field", part))

    def test_period_must_be_positive(self):
        """Test: periods 0, −4, 2.5 and true are rejected before any complex is read."""
        for period in (0, -4, 2.5, True):
            with self.subTest(period=period):
                with self.assertRaises(ValidationError) as cm:
                    parse_triangle({"period": period, "complexes": [{}, {}, {}], "f": [None] * 3})
                self.assertEqual(cm.exception.subject, ("field", "period"))
        with self.assertRaises(ValidationError):
            parse_triangle([1, 2, 3])

    def test_file_errors_cite_a_line(self):
        """Test: a structural error in a file points at the line of the failing key."""
        data = json.loads((DATA / "triangle_identity.json").read_text(encoding="utf-8"))
        data["f"] = data["f"][:2]
        text = json.dumps(data, indent=2)
        expected = text.splitlines().index('  "f": [') + 1
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "short_f.json"
            path.write_text(text, encoding="utf-8")
            with self.assertRaises(ManifestError) as cm:
                load_triangle(path)
        self.assertEqual(cm.exception.line, expected)
        self.assertIn(f"short_f.json:{expected}", str(cm.exception))


class TestExactness(unittest.TestCase):

    @staticmethod
    def identity_map(v: GradedDimVector) -> HomologyMap:
        return HomologyMap(0, {k: BitMatrix.identity(v[k]) for k in range(v.period)})

    @staticmethod
    def zero_map(source: GradedDimVector, target: GradedDimVector) -> HomologyMap:
        return HomologyMap(0, {k: BitMatrix.zeros(target[k], source[k]) for k in range(source.period)})

    def test_zero_vertex_with_isomorphism_is_exact(self):
        """Test: V_2 = 0 and V_0 →id V_1 is exact with one forced isomorphism."""
        v = GradedDimVector((1, 0, 2, 0))
        verdict = exactness_check([v, v, GradedDimVector.zero(4)], [self.identity_map(v), None, None])
        self.assertTrue(verdict.exact)
        self.assertEqual(verdict.checked_vertices, [0, 1, 2])
        self.assertEqual(verdict.forced_isomorphisms, ["V0 → V1 must be an isomorphism since V2 = 0"])

    def test_zero_map_opposite_zero_vertex_fails(self):
        """Test: a zero map where an isomorphism is forced is not exact."""
        v = GradedDimVector((1, 0, 0, 0))
        verdict = exactness_check([v, v, GradedDimVector.zero(4)], [self.zero_map(v, v), None, None])
        self.assertFalse(verdict.exact)
        self.assertTrue(verdict.failures)
        self.assertTrue(verdict.forced_isomorphisms[0].endswith("(violated)"))

    def test_unknown_maps_leave_vertices_unchecked(self):
        """Test: missing maps between nonzero vertices are not guessed."""
        v = GradedDimVector((1, 0, 0, 0))
        verdict = exactness_check([v, v, v], [None, None, None])
        self.assertTrue(verdict.exact)
        self.assertEqual(verdict.checked_vertices, [])

    def test_shape_mismatch(self):
        """Test: blocks must match the vertex dimensions."""
        v = GradedDimVector((1, 0, 0, 0))
        with self.assertRaises(ValidationError):
            exactness_check([v, v, v], [self.identity_map(GradedDimVector((2, 0, 0, 0))), None, None])


class TestSurgeryRanks(unittest.TestCase):

    def setUp(self):
        self.base = GradedDimVector((0, 1, 0, 0, 0, 1, 0, 0))

    def test_summand_count_and_total(self):
        """Test: 1/n surgery has |n| summands and |n| times the base rank."""
        for n in range(-6, 7):
            if n == 0:
                continue
            self.assertEqual(len(surgery_summands(n, self.base)), abs(n))
            self.assertEqual(surgery_ranks(n, self.base).total, abs(n) * self.base.total)

    def test_minus_two(self):
        """Test: n = −2 on ranks in degrees 1 and 5 fills every odd degree."""
        self.assertEqual(surgery_ranks(-2, self.base).support(), [1, 3, 5, 7])

    def test_plus_one_is_the_base(self):
        """Test: n = 1 returns the base ranks."""
        self.assertEqual(surgery_ranks(1, self.base), self.base)

    def test_consecutive_n_differ_by_one_shifted_base(self):
        """Test: ranks(n) = ranks(n ∓ 1) + base shifted by 2(|n| − 1)·sign(n)."""
        for n in list(range(2, 11)) + list(range(-10, -1)):
            sign = 1 if n > 0 else -1
            previous = surgery_ranks(n - sign, self.base)
            step = self.base.shifted(2 * (abs(n) - 1) * sign)
            self.assertEqual(surgery_ranks(n, self.base), previous + step)

    def test_zero_surgery_rejected(self):
        """Test: n = 0 is not a homology sphere surgery."""
        with self.assertRaises(ValidationError):
            surgery_ranks(0, self.base)

    def test_bridge_collapses_and_shifts(self):
        """Test: the ℤ/4 vector for +1 surgery reads I_e = I_{e+3} of the −1 surgery."""
        minus_one = GradedDimVector((1, 0, 0, 0, 0, 0, 2, 0))
        self.assertEqual(degree_shift_bridge(minus_one).dims, (0, 1, 0, 2))

    def test_euler_characteristic(self):
        """Test: odd degrees count negatively."""
        self.assertEqual(euler_characteristic(self.base), -2)
        self.assertEqual(euler_characteristic(GradedDimVector.parse("1,0,2,0")), 3)

    def test_parse_rejects_garbage(self):
        """Test: non-integer or wrong-length input is invalid."""
        for text in ("1,2,x,4", "1,2,3"):
            with self.assertRaises(ValidationError):
                GradedDimVector.parse(text)


if __name__ == "__main__":
    unittest.main()
