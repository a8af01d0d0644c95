import unittest
from fractions import Fraction

from src.errors import ValidationError
from src.floer.cobordism import (
    SCENARIOS, CobordismTopology, FlatLimitType, asd_index, broken_index_bound, degree_level, energy_relation,
    index_additivity, minimal_reducible, reducibles_on_N,
)


class TestDegreeLevel(unittest.TestCase):

    def test_family_with_c_squared_minus_one(self):
        """Test: a one-parameter family with c² = −1 has D = 3 and L = 1/4 − η, η > 0."""
        meta = degree_level(CobordismTopology(c_squared=Fraction(-1), family_dim=1, name="W"))
        self.assertEqual((meta.degree, meta.level_base), (3, Fraction(1, 4)))
        self.assertTrue(meta.slack.strict)
        self.assertEqual(meta.slack.symbols, ("η(W)",))
        self.assertFalse(meta.injective_all_degrees)

    def test_single_metric(self):
        """Test: c² = 0 on one metric gives D = 0 and L = −η."""
        meta = degree_level(CobordismTopology())
        self.assertEqual((meta.degree, meta.level_base), (0, Fraction(0)))
        self.assertEqual(meta.level_text(), "−η(W)")

    def test_single_metric_with_c_squared_minus_one(self):
        """Test: c² = −1 on one metric gives D = 2 and L = 1/4 − η."""
        meta = degree_level(CobordismTopology(c_squared=Fraction(-1)))
        self.assertEqual((meta.degree, meta.level_base), (2, Fraction(1, 4)))
        self.assertEqual(meta.level_text(), "1/4 − η(W)")

    def test_not_simply_connected_is_weak(self):
        """Test: without simple connectivity only η ≥ 0 is known."""
        meta = degree_level(CobordismTopology(c_squared=Fraction(-1), simply_connected=False))
        self.assertFalse(meta.slack.strict)

    def test_rejections(self):
        """Test: b⁺ > 0, b₁ > 0 and a fractional degree are rejected."""
        with self.assertRaises(ValidationError):
            degree_level(CobordismTopology(bplus=1))
        with self.assertRaises(ValidationError):
            CobordismTopology(b1=1)
        with self.assertRaises(ValidationError):
            degree_level(CobordismTopology(c_squared=Fraction(-1, 3)))


class TestIndexArithmetic(unittest.TestCase):

    def test_energy(self):
        """Test: E = −c²/4 + cs(α) − cs(α′)."""
        self.assertEqual(energy_relation(Fraction(-1), Fraction(1, 120), Fraction(49, 120)), Fraction(-3, 20))

    def test_index_additivity(self):
        """Test: i(α) + 3 + (−2c² − 3) − i(α′)."""
        self.assertEqual(index_additivity(1, Fraction(-1), 5), -2)
        with self.assertRaises(ValidationError):
            index_additivity(1, Fraction(-1, 4), 5)

    def test_asd_index(self):
        """Test: the trivial connection has index −3 and each unit of 8E adds one."""
        self.assertEqual(asd_index(0, 0, []), -3)
        self.assertEqual(asd_index(4, 0, []), 1)
        self.assertEqual(asd_index(0, 1, []), -6)
        ends = [FlatLimitType.CENTRAL, FlatLimitType.CENTRAL, FlatLimitType.ABELIAN]
        self.assertEqual(asd_index(1, 0, ends), -1)

    def test_stabilizer_dimensions(self):
        """Test: h⁰ is 3, 1 and 0."""
        self.assertEqual([t.h0 for t in FlatLimitType], [3, 1, 0])


class TestReducibles(unittest.TestCase):

    def test_unique_minimum_at_n_one(self):
        """Test: with ĉ² = −1/2 the n = 1 solution has 8E = 1, index −1, and is the unique minimum."""
        found = reducibles_on_N()
        self.assertEqual(len(found), 10)
        self.assertEqual((found[0].e8, found[0].index), (Fraction(1), Fraction(-1)))
        self.assertEqual(found[1].index, Fraction(7))
        self.assertIs(minimal_reducible(found), found[0])

    def test_index_increases_with_n(self):
        """Test: the reducible index grows strictly in n."""
        indices = [r.index for r in reducibles_on_N(n_max=10)]
        self.assertEqual(indices, sorted(set(indices)))

    def test_shared_minimum(self):
        """Test: a tie at the minimum gives no unique reducible."""
        found = reducibles_on_N(n_max=1)
        self.assertIsNone(minimal_reducible(found + found))
        self.assertIsNone(minimal_reducible([]))


class TestBrokenIndexBounds(unittest.TestCase):

    def test_catalogue_values(self):
        """Test: each breaking pattern sums to its tabulated bound."""
        expected = {
            'reducible-unbroken': -4,
            'reducible-core-broken': 4,
            'neck-z-reducible-limit': 1,
            'neck-z-one-reducible': 3,
            'neck-z-both-reducible': 3,
            'neck-z': 1,
            'neck-rp3': 0,
            'neck-s3': 2,
            'pentagon-interior': -2,
            'pentagon-s3-face': 1,
            'pentagon-z-face': -1,
            'pentagon-rp3-face': -1,
            'pentagon-s2xs1-face': -1,
        }
        for scenario, bound in expected.items():
            with self.subTest(scenario=scenario):
                self.assertEqual(broken_index_bound(scenario).bound, bound)
        self.assertEqual(set(expected) | {'irreducible-pieces-reducible-limit'}, set(SCENARIOS))

    def test_irreducible_pieces_depend_on_gap(self):
        """Test: two index-one pieces minus the family dimension i − j − 1."""
        self.assertEqual(broken_index_bound('irreducible-pieces-reducible-limit', gap=2).bound, 1)
        self.assertEqual(broken_index_bound('irreducible-pieces-reducible-limit', gap=4).bound, -1)
        with self.assertRaises(ValidationError):
            broken_index_bound('irreducible-pieces-reducible-limit', gap=0)

    def test_small_gaps(self):
        """Test: gaps 2 and 3 give bounds 1 and 0."""
        for gap, bound in ((2, 1), (3, 0)):
            self.assertEqual(broken_index_bound('irreducible-pieces-reducible-limit', gap=gap).bound, bound)

    def test_negative_definite_unbroken(self):
        """Test: b⁺ = 0 improves the unbroken reducible bound to −3."""
        self.assertEqual(broken_index_bound('reducible-unbroken', bplus=0).bound, -3)

    def test_text(self):
        """Test: negative components are parenthesised."""
        self.assertEqual(str(broken_index_bound('neck-rp3')), "i(A) ≥ 0 + (-1) + 1 = 0")

    def test_unknown_scenario(self):
        """Test: an unknown name lists the catalogue."""
        with self.assertRaises(ValidationError):
            broken_index_bound('nowhere')


if __name__ == "__main__":
    unittest.main()
