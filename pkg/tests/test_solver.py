import random
import unittest

from poly_images.budgets import Budgets
from poly_images.errors import Exhausted, InvalidInput, TargetUnsplittable
from poly_images.fields import RATIONALS, FieldDescriptor
from poly_images.jordan import JordanData
from poly_images.matrices import Matrix
from poly_images.paths.base import PathName
from poly_images.paths.commutator import commutator_form
from poly_images.polynomials import MultilinearCubic
from poly_images.registry import PathRegistry
from poly_images.solver import make_context, solve_general, solve_jordan

Q = RATIONALS
XYZ = MultilinearCubic.from_words(Q, {"xyz": 1})

# det 2 over Q
P3 = Matrix(Q, [[1, 1, 0], [0, 1, 1], [1, 0, 1]])
P4 = Matrix(Q, [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 2]])


class TestSolveGeneral(unittest.TestCase):
    def test_zero_target(self):
        witness = solve_general(XYZ, Matrix.zeros(Q, 3), random.Random(1))
        assert witness.path == PathName.CORE
        assert all(M.is_zero() for M in witness.arguments())

    def test_conjugated_diagonal(self):
        T = Matrix.diag(Q, [1, 2, 3]).conjugate(P3)
        witness = solve_general(XYZ, T, random.Random(2))
        assert witness.path == PathName.CORE
        assert witness.verified
        assert XYZ.eval(*witness.arguments()) == T

    def test_conjugated_two_block(self):
        J = JordanData(d=tuple(Q.from_int(v) for v in (5, 5, 1, 2)), nu=tuple(Q.from_int(v) for v in (1, 0, 0, 0)))
        T = J.matrix().conjugate(P4)
        f = MultilinearCubic.from_words(Q, {"xyz": 2, "zxy": 1})
        witness = solve_general(f, T, random.Random(3))
        assert witness.path == PathName.BLOCK_SPLIT
        assert f.eval(*witness.arguments()) == T

    def test_unsplittable(self):
        with self.assertRaises(TargetUnsplittable):
            solve_general(XYZ, Matrix(Q, [[0, 1], [2, 0]]), random.Random(4))

    def test_small_sizes_fall_back(self):
        T = Matrix(Q, [[2, 1], [0, 3]])
        witness = solve_general(XYZ, T, random.Random(5))
        assert witness.path == PathName.FALLBACK
        assert XYZ.eval(*witness.arguments()) == T

    def test_traceless_polynomial(self):
        f = MultilinearCubic.from_words(Q, {"xyz": 1, "yzx": -1})
        T = Matrix.diag(Q, [1, 2, -3])
        witness = solve_general(f, T, random.Random(6))
        assert witness.path == PathName.FALLBACK
        assert f.eval(*witness.arguments()) == T
        with self.assertRaises(Exhausted):
            solve_general(f, Matrix.identity(Q, 3), random.Random(6), make_context(random.Random(6), Budgets(fallback_tries=5)))

    def test_commutator_form(self):
        f = commutator_form(Q, 3, leading="z")
        T = Matrix.diag(Q, [1, 2, 3]).conjugate(P3)
        witness = solve_general(f, T, random.Random(7))
        assert witness.path == PathName.COMMUTATOR
        assert f.eval(*witness.arguments()) == T

    def test_finite_field(self):
        field = FieldDescriptor.finite(13)
        f = MultilinearCubic.from_coefficients(field, [1, 2, 0, 0, 3, 0])
        P = Matrix(field, [[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        T = Matrix.diag(field, [field.from_int(v) for v in (4, 5, 6)]).conjugate(P)
        witness = solve_general(f, T, random.Random(8))
        assert f.eval(*witness.arguments()) == T


class TestSolveJordan(unittest.TestCase):
    def test_dispatch(self):
        in_jn = JordanData(d=tuple(Q.from_int(v) for v in (1, 2, 3)), nu=tuple(Q.from_int(v) for v in (1, 1, 0)))
        assert solve_jordan(XYZ, in_jn, random.Random(9)).path == PathName.CORE
        block = JordanData(d=tuple(Q.from_int(v) for v in (1, 1, 2, 3)), nu=tuple(Q.from_int(v) for v in (1, 0, 0, 0)))
        witness = solve_jordan(XYZ, block, random.Random(9))
        assert witness.path == PathName.BLOCK_SPLIT
        assert XYZ.eval(*witness.arguments()) == block.matrix()

    def test_missing_path(self):
        context = make_context(random.Random(10), paths=PathRegistry.from_dict({"core": "poly_images.paths.core.CorePath"}))
        block = JordanData(d=tuple(Q.from_int(v) for v in (1, 1, 2, 3)), nu=tuple(Q.from_int(v) for v in (1, 0, 0, 0)))
        with self.assertRaises(InvalidInput) as caught:
            solve_jordan(XYZ, block, random.Random(10), context)
        assert caught.exception.location == "config.path.block_split"


if __name__ == "__main__":
    unittest.main()
