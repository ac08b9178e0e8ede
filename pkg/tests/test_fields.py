import random
import unittest
from fractions import Fraction

from poly_images.errors import DescriptorMismatch, DivisionByZero, InvalidInput
from poly_images.fields import (
    RATIONALS,
    FieldDescriptor,
    cyclotomic_polynomial,
    field_arith,
    nth_roots_of_unity,
    sample_nonzero,
)


def _polymul(a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
    product = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            product[i + j] += x * y
    return product


class TestCyclotomicPolynomials(unittest.TestCase):
    def test_known_values(self):
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(2) == (1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(6) == (1, -1, 1)

    def test_divisor_product(self):
        for n in range(1, 25):
            with self.subTest(n=n):
                product = [1]
                for d in range(1, n + 1):
                    if n % d == 0:
                        product = _polymul(tuple(product), cyclotomic_polynomial(d))
                assert product == [-1] + [0] * (n - 1) + [1]

    def test_invalid_order(self):
        with self.assertRaises(InvalidInput):
            cyclotomic_polynomial(0)


class TestFieldDescriptor(unittest.TestCase):
    def test_parse(self):
        assert FieldDescriptor.parse("Q") == RATIONALS
        assert FieldDescriptor.parse("cyclotomic:4") == FieldDescriptor.cyclotomic(4)
        assert FieldDescriptor.parse("gf:5") == FieldDescriptor.finite(5)
        field = FieldDescriptor.parse("gf:3^2")
        assert field.order() == 9
        assert field.characteristic() == 3
        assert field.degree == 2

    def test_parse_rejects(self):
        for text in ("R", "cyclotomic:x", "gf:", "gf:4"):
            with self.subTest(text=text):
                with self.assertRaises(InvalidInput):
                    FieldDescriptor.parse(text)

    def test_unknown_field_location(self):
        with self.assertRaises(InvalidInput) as caught:
            FieldDescriptor.parse("R")
        assert caught.exception.location == "--field"

    def test_from_order(self):
        assert FieldDescriptor.from_order(7) == FieldDescriptor.finite(7)
        assert FieldDescriptor.from_order(8) == FieldDescriptor.finite(2, 3)
        for q in (1, 6, 12):
            with self.subTest(q=q):
                with self.assertRaises(InvalidInput):
                    FieldDescriptor.from_order(q)

    def test_serialize(self):
        for field in (RATIONALS, FieldDescriptor.cyclotomic(6), FieldDescriptor.finite(2, 2)):
            with self.subTest(field=str(field)):
                assert FieldDescriptor.from_primitive(field.to_primitive()) == field
                assert FieldDescriptor.from_primitive(str(field)) == field

    def test_reducible_modulus(self):
        with self.assertRaises(InvalidInput):
            FieldDescriptor.finite(2, 2, modulus=[1, 0, 1])

    def test_elements(self):
        field = FieldDescriptor.finite(2, 2)
        elements = list(field.elements())
        assert len(elements) == 4
        assert [field.element_index(e) for e in elements] == [0, 1, 2, 3]
        with self.assertRaises(InvalidInput):
            RATIONALS.elements()


class TestFieldArithmetic(unittest.TestCase):
    def test_rationals(self):
        half = RATIONALS.from_fraction(Fraction(1, 2))
        third = RATIONALS.from_fraction(Fraction(1, 3))
        assert field_arith(half, third, "add") == Fraction(5, 6)
        assert field_arith(half, third, "sub") == Fraction(1, 6)
        assert field_arith(half, third, "mul") == Fraction(1, 6)
        assert field_arith(half, third, "div") == Fraction(3, 2)

    def test_prime_field(self):
        gf5 = FieldDescriptor.finite(5)
        assert gf5.from_int(3) * gf5.from_int(4) == 2
        assert gf5.from_int(7) == 2
        assert gf5.from_int(2).inverse() == 3
        assert gf5.from_fraction(Fraction(1, 2)) == 3

    def test_cyclotomic(self):
        field = FieldDescriptor.cyclotomic(4)
        zeta = field.generator()
        assert zeta * zeta == -1
        cube_root = FieldDescriptor.cyclotomic(3).generator()
        assert cube_root**3 == 1
        assert cube_root != 1

    def test_inverses(self):
        rng = random.Random(7)
        for field in (RATIONALS, FieldDescriptor.cyclotomic(5), FieldDescriptor.finite(2, 3), FieldDescriptor.finite(7)):
            with self.subTest(field=str(field)):
                for _ in range(5):
                    a = sample_nonzero(field, rng, box=5)
                    assert a * a.inverse() == 1
                    assert a / a == field.one()

    def test_extension_field_is_a_field(self):
        field = FieldDescriptor.finite(3, 2)
        for a in field.elements():
            if not a.is_zero():
                assert a * a.inverse() == 1
                # the multiplicative group has order 8
                assert a**8 == 1

    def test_division_by_zero(self):
        for field in (RATIONALS, FieldDescriptor.cyclotomic(3), FieldDescriptor.finite(5)):
            with self.subTest(field=str(field)):
                with self.assertRaises(DivisionByZero):
                    field.zero().inverse()
        with self.assertRaises(DivisionByZero):
            FieldDescriptor.finite(5).from_fraction(Fraction(1, 5))

    def test_mixed_fields(self):
        gf5, gf7 = FieldDescriptor.finite(5), FieldDescriptor.finite(7)
        with self.assertRaises(DescriptorMismatch):
            gf5.one() + gf7.one()
        with self.assertRaises(DescriptorMismatch):
            field_arith(gf5.one(), RATIONALS.one(), "mul")


class TestElementEncoding(unittest.TestCase):
    def test_to_primitive(self):
        assert RATIONALS.from_fraction(Fraction(1, 2)).to_primitive() == "1/2"
        assert RATIONALS.from_int(-3).to_primitive() == "-3"
        assert FieldDescriptor.finite(5).from_int(4).to_primitive() == "4"
        assert FieldDescriptor.cyclotomic(4).generator().to_primitive() == ["0", "1"]
        assert FieldDescriptor.finite(2, 2).generator().to_primitive() == [0, 1]

    def test_parse_element(self):
        assert RATIONALS.parse_element("3/4") == Fraction(3, 4)
        assert RATIONALS.parse_element(-2) == -2
        assert FieldDescriptor.finite(5).parse_element("7") == 2
        zeta = FieldDescriptor.cyclotomic(4).parse_element(["0", "1"])
        assert zeta == FieldDescriptor.cyclotomic(4).generator()

    def test_parse_element_rejects(self):
        for primitive in ("abc", True, None, {"a": 1}):
            with self.subTest(primitive=primitive):
                with self.assertRaises(InvalidInput) as caught:
                    RATIONALS.parse_element(primitive, location="entry")
                assert caught.exception.location == "entry"
        with self.assertRaises(InvalidInput):
            FieldDescriptor.cyclotomic(4).parse_element(["1", "2", "3"])


class TestRootsOfUnity(unittest.TestCase):
    def test_counts(self):
        cases = [
            (RATIONALS, 5, 1),
            (RATIONALS, 4, 2),
            (FieldDescriptor.finite(5), 4, 4),
            (FieldDescriptor.finite(7), 6, 6),
            (FieldDescriptor.finite(7), 4, 2),
            (FieldDescriptor.cyclotomic(6), 6, 6),
            (FieldDescriptor.cyclotomic(3), 6, 6),
            (FieldDescriptor.cyclotomic(4), 6, 2),
        ]
        for field, n, count in cases:
            with self.subTest(field=str(field), n=n):
                roots = nth_roots_of_unity(field, n)
                assert len(roots) == count
                assert len(set(roots)) == count
                assert roots[0] == 1
                assert all(r**n == 1 for r in roots)

    def test_finite_field_order(self):
        gf5 = FieldDescriptor.finite(5)
        assert [r.to_primitive() for r in nth_roots_of_unity(gf5, 4)] == ["1", "2", "3", "4"]

    def test_invalid_n(self):
        with self.assertRaises(InvalidInput):
            nth_roots_of_unity(RATIONALS, 0)


if __name__ == "__main__":
    unittest.main()
