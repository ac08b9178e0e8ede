import random
import unittest

from poly_images.errors import DescriptorMismatch, InvalidInput
from poly_images.fields import RATIONALS, FieldDescriptor
from poly_images.matrices import Matrix, random_matrix
from poly_images.polynomials import (
    ALL_PERMUTATIONS,
    IDENTITY,
    ROTATE,
    SWAP_XZ,
    MultilinearCubic,
    coefficient_sums,
    compose_permutations,
    eval_poly,
    invert_permutation,
    is_cyclic,
    linear_map_in_z,
    permute_arguments,
    permute_variables,
)
from poly_images.testing import random_cubic

Q = RATIONALS


class TestEvaluation(unittest.TestCase):
    def test_single_monomials(self):
        rng = random.Random(1)
        X, Y, Z = (random_matrix(Q, 3, rng) for _ in range(3))
        expected = {
            "xyz": X @ Y @ Z,
            "yzx": Y @ Z @ X,
            "zxy": Z @ X @ Y,
            "zyx": Z @ Y @ X,
            "xzy": X @ Z @ Y,
            "yxz": Y @ X @ Z,
        }
        for word, value in expected.items():
            with self.subTest(word=word):
                assert MultilinearCubic.from_words(Q, {word: 1}).eval(X, Y, Z) == value

    def test_trace_only_sees_the_sums(self):
        rng = random.Random(2)
        for field in (Q, FieldDescriptor.finite(7)):
            with self.subTest(field=str(field)):
                f = random_cubic(field, rng)
                X, Y, Z = (random_matrix(field, 3, rng) for _ in range(3))
                lambda_sum, mu_sum = f.coefficient_sums()
                expected = lambda_sum * (X @ Y @ Z).trace() + mu_sum * (Z @ Y @ X).trace()
                assert f.eval(X, Y, Z).trace() == expected

    def test_mismatched_arguments(self):
        f = MultilinearCubic.from_words(Q, {"xyz": 1})
        gf5 = FieldDescriptor.finite(5)
        with self.assertRaises(DescriptorMismatch):
            f.eval(*(Matrix.identity(gf5, 2) for _ in range(3)))
        with self.assertRaises(InvalidInput):
            MultilinearCubic.from_words(Q, {"xxy": 1})


class TestPermutations(unittest.TestCase):
    def test_permute_variables(self):
        rng = random.Random(3)
        f = random_cubic(Q, rng)
        arguments = [random_matrix(Q, 2, rng) for _ in range(3)]
        for sigma in ALL_PERMUTATIONS:
            with self.subTest(sigma=sigma):
                g = f.permute_variables(sigma)
                assert g.eval(*arguments) == f.eval(*permute_arguments(arguments, sigma))

    def test_compose_and_invert(self):
        f = random_cubic(Q, random.Random(4))
        for sigma in ALL_PERMUTATIONS:
            for tau in ALL_PERMUTATIONS:
                with self.subTest(sigma=sigma, tau=tau):
                    assert f.permute_variables(sigma).permute_variables(tau) == f.permute_variables(compose_permutations(sigma, tau))
            assert f.permute_variables(sigma).permute_variables(invert_permutation(sigma)) == f

    def test_swap_exchanges_families(self):
        f = MultilinearCubic.from_coefficients(Q, [1, 2, 3, 4, 5, 6])
        g = f.permute_variables(SWAP_XZ)
        assert g.coefficient_sums() == (Q.from_int(15), Q.from_int(6))
        assert f.permute_variables(ROTATE).coefficient_sums() == f.coefficient_sums()
        assert is_cyclic(ROTATE) and is_cyclic(IDENTITY) and not is_cyclic(SWAP_XZ)

    def test_invalid_permutation(self):
        with self.assertRaises(InvalidInput):
            MultilinearCubic.from_words(Q, {"xyz": 1}).permute_variables((0, 0, 1))


class TestLinearMaps(unittest.TestCase):
    def test_each_slot(self):
        rng = random.Random(5)
        for field in (Q, FieldDescriptor.finite(3, 2)):
            with self.subTest(field=str(field)):
                f = random_cubic(field, rng)
                X, Y, Z = (random_matrix(field, 3, rng) for _ in range(3))
                value = f.eval(X, Y, Z).vec()
                assert f.linear_map_in_z(X, Y).apply(Z.vec()) == value
                assert f.linear_map_in_slot("x", Y, Z).apply(X.vec()) == value
                assert f.linear_map_in_slot("y", X, Z).apply(Y.vec()) == value


class TestSerialization(unittest.TestCase):
    def test_roundtrip(self):
        for field in (Q, FieldDescriptor.cyclotomic(3), FieldDescriptor.finite(2, 2)):
            with self.subTest(field=str(field)):
                f = random_cubic(field, random.Random(6))
                assert MultilinearCubic.from_primitive(f.to_primitive()) == f

    def test_missing_monomials_are_zero(self):
        f = MultilinearCubic.from_primitive({"xyz": 1, "zyx": "-1"}, field=Q)
        assert f == MultilinearCubic.from_coefficients(Q, [1, 0, 0, -1, 0, 0])
        assert str(f) == "(1)*xyz + (-1)*zyx"

    def test_rejects(self):
        cases = [
            ([1, 2], None, "poly"),
            ({"xyz": 1}, None, "poly"),
            ({"xyz": 1, "xxy": 2}, Q, "poly.xxy"),
            ({"field": "gf:5", "xyz": 1}, Q, "poly.field"),
            ({"xyz": "one"}, Q, "poly.xyz"),
        ]
        for primitive, field, location in cases:
            with self.subTest(location=location):
                with self.assertRaises(InvalidInput) as caught:
                    MultilinearCubic.from_primitive(primitive, field=field)
                assert caught.exception.location == location


class TestFunctionalForms(unittest.TestCase):
    def test_functions_match_methods(self):
        rng = random.Random(11)
        f = random_cubic(Q, rng)
        X, Y, Z = (random_matrix(Q, 3, rng) for _ in range(3))
        assert eval_poly(f, X, Y, Z) == f.eval(X, Y, Z)
        assert coefficient_sums(f) == f.coefficient_sums()
        assert permute_variables(f, ROTATE) == f.permute_variables(ROTATE)
        assert list(linear_map_in_z(f, X, Y).apply(Z.vec())) == list(f.eval(X, Y, Z).vec())


if __name__ == "__main__":
    unittest.main()
