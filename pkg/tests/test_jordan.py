import unittest

from poly_images.errors import InvalidInput, Unsplittable
from poly_images.fields import RATIONALS, FieldDescriptor
from poly_images.jordan import JordanData, TargetClass, eigenvalues, jordan_form
from poly_images.matrices import Matrix

Q = RATIONALS

# det 2, invertible over Q and GF(5)
P3 = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
P4 = [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 2]]


class TestEigenvalues(unittest.TestCase):
    def test_rational_roots(self):
        M = Matrix.diag(Q, [3, 1, 2, 1])
        assert eigenvalues(M) == [(Q.from_int(1), 2), (Q.from_int(2), 1), (Q.from_int(3), 1)]

    def test_unsplittable(self):
        rotation = Matrix(Q, [[0, 1], [-1, 0]])
        with self.assertRaises(Unsplittable):
            eigenvalues(rotation)
        with self.assertRaises(Unsplittable):
            eigenvalues(Matrix(Q, [[0, 1], [2, 0]]))

    def test_splits_over_extensions(self):
        cyclotomic = FieldDescriptor.cyclotomic(4)
        zeta = cyclotomic.generator()
        found = {value for value, _ in eigenvalues(Matrix(cyclotomic, [[0, 1], [-1, 0]]))}
        assert found == {zeta, -zeta}

        gf5 = FieldDescriptor.finite(5)
        assert eigenvalues(Matrix(gf5, [[0, 1], [-1, 0]])) == [(gf5.from_int(2), 1), (gf5.from_int(3), 1)]


class TestJordanForm(unittest.TestCase):
    def _check(self, M: Matrix, data: JordanData):
        assert data.P is not None
        assert data.P @ data.matrix() @ data.P.inverse() == M

    def test_diagonalizable(self):
        P = Matrix(Q, P3)
        M = Matrix.diag(Q, [3, 1, 2]).conjugate(P)
        data = jordan_form(M)
        self._check(M, data)
        assert data.d == (1, 2, 3)
        assert data.nu == (0, 0, 0)
        assert data.classify_target() == TargetClass.IN_JN

    def test_single_two_block(self):
        M = Matrix(Q, [[2, 1], [0, 2]])
        data = jordan_form(M)
        self._check(M, data)
        assert data.d == (2, 2)
        assert data.nu == (1, 0)
        assert data.classify_target() == TargetClass.SINGLE_TWO_BLOCK

    def test_longer_chains(self):
        for field in (Q, FieldDescriptor.finite(5)):
            with self.subTest(field=str(field)):
                J = JordanData(d=tuple(field.from_int(v) for v in (1, 1, 1, 2)), nu=tuple(field.from_int(v) for v in (1, 1, 0, 0)))
                P = Matrix(field, P4)
                M = J.matrix().conjugate(P)
                data = jordan_form(M)
                self._check(M, data)
                assert data.d == J.d
                assert data.nu == J.nu

    def test_nilpotent(self):
        M = Matrix(Q, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
        data = jordan_form(M)
        self._check(M, data)
        assert data.d == (0, 0, 0)
        assert sorted(v.to_primitive() for v in data.nu) == ["0", "0", "1"]


class TestJordanData(unittest.TestCase):
    def test_matrix_wraps_around(self):
        zero, one = Q.zero(), Q.one()
        data = JordanData(d=(zero, zero, zero), nu=(zero, zero, one))
        assert data.matrix() == Matrix.unit(Q, 3, 2, 0)
        assert data.nu_support() == [2]

    def test_from_primitive(self):
        data = JordanData.from_primitive({"d": ["1", "2"]}, Q)
        assert data.nu == (0, 0)
        data = JordanData.from_primitive({"d": [1, 2, 3], "nu": [1, "1/2", 0]}, Q)
        assert data.classify_target() == TargetClass.IN_JN
        assert data.to_primitive() == {"d": ["1", "2", "3"], "nu": ["1", "1/2", "0"], "class": "InJn"}

    def test_from_primitive_rejects(self):
        cases = [
            ({"nu": [1]}, "target"),
            ({"d": []}, "target"),
            ({"d": [1, 2], "nu": "x"}, "target"),
            ({"d": [1, "x"]}, "target.d[1]"),
        ]
        for primitive, location in cases:
            with self.subTest(primitive=primitive):
                with self.assertRaises(InvalidInput) as caught:
                    JordanData.from_primitive(primitive, Q)
                assert caught.exception.location == location
        with self.assertRaises(InvalidInput):
            JordanData.from_primitive({"d": [1, 2], "nu": [1]}, Q)


if __name__ == "__main__":
    unittest.main()
