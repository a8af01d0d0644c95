import unittest
from fractions import Fraction

from src.algebra.rationals import INF, NEG_INF, ExtendedRational, format_rational, parse_rational
from src.errors import ValidationError


class TestParseRational(unittest.TestCase):
    """Tests the "p/q" text form used in every data file."""

    def test_lowest_terms(self):
        """Test: "1/120" and "-13/60" parse exactly."""
        self.assertEqual(parse_rational("1/120"), Fraction(1, 120))
        self.assertEqual(parse_rational("-13/60"), Fraction(-13, 60))

    def test_rejects_floats_and_unreduced(self):
        """Test: floats, unreduced fractions and zero denominators are rejected."""
        for text in ("0.5", "2/4", "1/0", "", "1/-2"):
            with self.subTest(text=text):
                with self.assertRaises(ValidationError):
                    parse_rational(text)

    def test_non_strict_accepts_integers(self):
        """Test: plain integers are accepted only outside strict mode."""
        self.assertEqual(parse_rational("-1", strict=False), Fraction(-1))
        self.assertEqual(parse_rational("2/4", strict=False), Fraction(1, 2))
        with self.assertRaises(ValidationError):
            parse_rational("-1")

    def test_format_always_has_denominator(self):
        """Test: integers are formatted as "n/1"."""
        self.assertEqual(format_rational(2), "2/1")
        self.assertEqual(format_rational(Fraction(-13, 60)), "-13/60")


class TestExtendedRational(unittest.TestCase):

    def test_order_with_infinities(self):
        """Test: −∞ < every finite value < ∞."""
        finite = ExtendedRational.of(Fraction(-13, 60))
        self.assertLess(NEG_INF, finite)
        self.assertLess(finite, INF)
        self.assertEqual(min(INF, finite), finite)

    def test_arithmetic(self):
        """Test: adding a rational keeps ∞ infinite and shifts finite values."""
        self.assertEqual(INF + 1, INF)
        self.assertEqual(ExtendedRational.of(Fraction(1, 120)) - Fraction(1, 8), Fraction(-7, 60))

    def test_inf_minus_inf_raises(self):
        """Test: ∞ − ∞ is undefined."""
        with self.assertRaises(ValidationError):
            INF + NEG_INF

    def test_json_forms(self):
        """Test: JSON uses "inf", "-inf" and "p/q"."""
        self.assertEqual(INF.to_json(), "inf")
        self.assertEqual(NEG_INF.to_json(), "-inf")
        self.assertEqual(ExtendedRational.of(Fraction(1, 2)).to_json(), "1/2")
        self.assertEqual(ExtendedRational.from_json("-13/60"), Fraction(-13, 60))
        self.assertEqual(ExtendedRational.from_json("inf"), INF)


if __name__ == "__main__":
    unittest.main()
