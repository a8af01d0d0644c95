import random
import unittest
from fractions import Fraction

from src.algebra.persistence import (
    Bar, Barcode, FilteredComplex, FlatGenerator, barcode, connecting_rank, critical_values, inclusion_rank,
    sublevel_homology,
)
from src.algebra.rationals import INF, ExtendedRational
from src.errors import ValidationError


def random_filtered_complex(rng: random.Random, max_generators: int = 40) -> FilteredComplex:
    """
    Generators in gradings 0..8 with cs in [0, 4). Each generator is either a
    source or a sink of the boundary, so there are no two-step paths and d∘d = 0.
    """
    generators = [
        FlatGenerator(f"g{i}", rng.randint(0, 8), Fraction(rng.randint(0, 47), 12))
        for i in range(rng.randint(0, max_generators))
    ]
    sources = {g.label for g in generators if rng.random() < 0.5}
    boundary = [
        (x.label, y.label)
        for x in generators if x.label in sources
        for y in generators if y.label not in sources
        if y.grading == x.grading - 1 and y.cs < x.cs and rng.random() < 0.4
    ]
    return FilteredComplex.create(generators, boundary)


def sample_points(c: FilteredComplex, d: int):
    """Critical values, points just below them, and one point beyond the last."""
    values = critical_values(c, d)
    points = set(values)
    points.update(v - Fraction(1, 48) for v in values)
    points.add((values[-1] + 1) if values else Fraction(0))
    return sorted(points)


class TestFilteredComplex(unittest.TestCase):

    def test_boundary_must_lower_filtration(self):
        """Test: a pair with cs(y) ≥ cs(x) is rejected."""
        with self.assertRaises(ValidationError):
            FilteredComplex.create([FlatGenerator("x", 1, Fraction(1, 4)), FlatGenerator("y", 0, Fraction(1, 4))],
                                   [("x", "y")])

    def test_boundary_must_lower_grading_by_one(self):
        """Test: a pair whose gradings differ by 2 is rejected."""
        with self.assertRaises(ValidationError):
            FilteredComplex.create([FlatGenerator("x", 2, Fraction(1)), FlatGenerator("y", 0, Fraction(0))],
                                   [("x", "y")])

    def test_d_squared_nonzero_rejected(self):
        """Test: a single two-step path makes d∘d ≠ 0."""
        generators = [FlatGenerator("x", 2, Fraction(2)), FlatGenerator("y", 1, Fraction(1)),
                      FlatGenerator("z", 0, Fraction(0))]
        with self.assertRaises(ValidationError):
            FilteredComplex.create(generators, [("x", "y"), ("y", "z")])

    def test_two_paths_cancel(self):
        """Test: two paths from x to z cancel modulo 2."""
        generators = [FlatGenerator("x", 2, Fraction(3)), FlatGenerator("y1", 1, Fraction(2)),
                      FlatGenerator("y2", 1, Fraction(1)), FlatGenerator("z", 0, Fraction(0))]
        c = FilteredComplex.create(generators, [("x", "y1"), ("x", "y2"), ("y1", "z"), ("y2", "z")])
        self.assertEqual(sublevel_homology(c, 10, 0), 0)
        self.assertEqual(sublevel_homology(c, 10, 1), 0)

    def test_duplicate_label(self):
        """Test: labels are unique."""
        with self.assertRaises(ValidationError):
            FilteredComplex.create([FlatGenerator("x", 0, Fraction(0)), FlatGenerator("x", 1, Fraction(1))])

    def test_translates_follow_periodicity(self):
        """Test: grading 9 sees the translate of a grading-1 generator with cs + 1."""
        c = FilteredComplex.create([FlatGenerator("alpha", 1, Fraction(1, 120))])
        (t,) = c.translates(9)
        self.assertEqual((t.grading, t.cs), (9, Fraction(121, 120)))
        self.assertEqual(c.translates(9, Fraction(1)), [])


class TestBarcode(unittest.TestCase):

    def setUp(self):
        self.poincare = FilteredComplex.create([
            FlatGenerator("alpha", 1, Fraction(1, 120)),
            FlatGenerator("beta", 5, Fraction(49, 120)),
        ])
        self.pair = FilteredComplex.create(
            [FlatGenerator("x", 1, Fraction(3, 4)), FlatGenerator("y", 0, Fraction(1, 4))],
            [("x", "y")],
        )

    def test_poincare_bars(self):
        """Test: two infinite bars, in degrees 1 and 5."""
        self.assertEqual(barcode(self.poincare).bars, (
            Bar(1, Fraction(1, 120), INF),
            Bar(5, Fraction(49, 120), INF),
        ))

    def test_cancelling_pair_is_a_finite_bar(self):
        """Test: x → y gives [1/4, 3/4) in degree 0, closed at the birth and open at the death."""
        b = barcode(self.pair)
        self.assertEqual(b.bars, (Bar(0, Fraction(1, 4), ExtendedRational.of(Fraction(3, 4))),))
        self.assertEqual(b.dimension(Fraction(1, 4), 0), 1)
        self.assertEqual(b.dimension(Fraction(3, 4), 0), 0)
        self.assertEqual(sublevel_homology(self.pair, Fraction(3, 4), 0), 0)

    def test_shift_rule(self):
        """Test: degree 9 carries the degree-1 bar moved up by one."""
        b = barcode(self.poincare)
        self.assertEqual(b.bars_in(9), [Bar(9, Fraction(121, 120), INF)])
        self.assertEqual(b.bars_in(-7), [Bar(-7, Fraction(-119, 120), INF)])

    def test_rewindowed_matches_direct_computation(self):
        """Test: moving the window agrees with computing in the new window."""
        self.assertEqual(barcode(self.poincare).rewindowed(3), barcode(self.poincare, 3))

    def test_bar_outside_window_rejected(self):
        """Test: a Barcode only holds bars of its own window."""
        with self.assertRaises(ValidationError):
            Barcode((Bar(8, Fraction(0), INF),), 0)

    def test_connecting_rank_requires_order(self):
        """Test: the map from a higher level to a lower one is not defined."""
        with self.assertRaises(ValidationError):
            connecting_rank(barcode(self.pair), 1, 0, 0)


class TestBarcodeAgainstSublevels(unittest.TestCase):
    """Randomised agreement between bars and direct sublevel computations."""

    def setUp(self):
        self.rng = random.Random(2024)

    def test_dimensions_match_sublevel_homology(self):
        """Test: bar counts equal dim F_r at every sample point, on 1000 random complexes."""
        for trial in range(1000):
            c = random_filtered_complex(self.rng)
            b = barcode(c)
            for d in range(8):
                for r in sample_points(c, d):
                    expected = sublevel_homology(c, r, d)
                    self.assertEqual(b.dimension(r, d), expected, msg=f"trial {trial}, degree {d}, r = {r}")

    def test_ranks_match_inclusion_rank(self):
        """Test: bars containing both levels count the rank of F_r → F_r2."""
        for trial in range(200):
            c = random_filtered_complex(self.rng)
            b = barcode(c)
            for d in range(8):
                points = sample_points(c, d)
                for _ in range(6):
                    r, r2 = sorted(self.rng.sample(points, 2)) if len(points) > 1 else (points[0], points[0])
                    self.assertEqual(connecting_rank(b, r, r2, d), inclusion_rank(c, r, r2, d),
                                     msg=f"trial {trial}, degree {d}, {r} → {r2}")

    def test_periodicity_of_sublevels(self):
        """Test: dim F_{r+1} in degree d + 8 equals dim F_r in degree d."""
        for _ in range(100):
            c = random_filtered_complex(self.rng, 20)
            for d in range(8):
                for r in sample_points(c, d):
                    self.assertEqual(sublevel_homology(c, r + 1, d + 8), sublevel_homology(c, r, d))


if __name__ == "__main__":
    unittest.main()
