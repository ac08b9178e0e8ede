import random
import unittest

from poly_images.errors import TargetNotInJn, UnsupportedSize
from poly_images.fields import RATIONALS, FieldDescriptor
from poly_images.jordan import JordanData
from poly_images.matrices import Matrix
from poly_images.paths.base import PathName
from poly_images.paths.block_split import BlockSplitPath, block_order, solve_block_split
from poly_images.polynomials import MultilinearCubic
from poly_images.solver import make_context

Q = RATIONALS


def _jordan(field, d, nu):
    return JordanData(d=tuple(field.from_int(v) for v in d), nu=tuple(field.from_int(v) for v in nu))


class TestBlockOrder(unittest.TestCase):
    def test_orders(self):
        assert block_order(4, 0) == [0, 1, 2, 3]
        assert block_order(5, 2) == [2, 3, 0, 1, 4]
        assert block_order(4, 3) == [3, 0, 1, 2]


class TestBlockSplit(unittest.TestCase):
    def test_leading_block(self):
        f = MultilinearCubic.from_words(Q, {"xyz": 1})
        jordan = _jordan(Q, [5, 5, 1, 2], [1, 0, 0, 0])
        witness = solve_block_split(f, jordan, random.Random(1))
        assert witness.path == PathName.BLOCK_SPLIT
        assert f.eval(*witness.arguments()) == jordan.matrix()

    def test_block_positions(self):
        f = MultilinearCubic.from_words(Q, {"xyz": 3, "zyx": 1})
        rng = random.Random(2)
        for k in range(5):
            nu = [0] * 5
            nu[k] = 1
            d = [7, 1, 2, 3, 4]
            d[(k + 1) % 5] = d[k]
            jordan = _jordan(Q, d, nu)
            with self.subTest(k=k):
                witness = solve_block_split(f, jordan, rng)
                assert f.eval(*witness.arguments()) == jordan.matrix()

    def test_finite_field(self):
        field = FieldDescriptor.finite(7)
        f = MultilinearCubic.from_words(field, {"xyz": 1, "yxz": 2})
        jordan = _jordan(field, [3, 3, 1, 5, 6], [1, 0, 0, 0, 0])
        witness = solve_block_split(f, jordan, random.Random(3))
        assert f.eval(*witness.arguments()) == jordan.matrix()

    def test_rejects(self):
        f = MultilinearCubic.from_words(Q, {"xyz": 1})
        with self.assertRaises(TargetNotInJn):
            solve_block_split(f, _jordan(Q, [1, 2, 3, 4], [1, 1, 0, 0]), random.Random(4))
        with self.assertRaises(UnsupportedSize):
            solve_block_split(f, _jordan(Q, [1, 1, 2], [1, 0, 0]), random.Random(4))

    def test_path(self):
        f = MultilinearCubic.from_words(Q, {"xyz": 1})
        target = _jordan(Q, [2, 1, 1, 3], [0, 1, 0, 0]).matrix()
        witness = BlockSplitPath().solve(f, target, make_context(random.Random(5)))
        assert f.eval(*witness.arguments()) == target


if __name__ == "__main__":
    unittest.main()
