"""
Jordan forms with a single 2x2 block: solve the block and the diagonal rest separately and glue them block-diagonally
"""
import logging
import random
from typing import Optional

from poly_images.budgets import Budgets
from poly_images.errors import CaseObstruction, SamplerExhausted, TargetNotInJn, UnsupportedSize
from poly_images.jordan import JordanData, TargetClass
from poly_images.matrices import Matrix, block_diag
from poly_images.paths.base import PathName, SolveContext, WitnessPath, WitnessTriple, verify_witness
from poly_images.paths.core import jordan_coordinates, solve_core_jn
from poly_images.paths.fallback import solve_linear_fallback
from poly_images.polynomials import MultilinearCubic

log = logging.getLogger(__name__)


def block_order(n: int, k: int) -> list[int]:
    """
    Basis order that moves the block at rows k, k+1 (mod n) to the front
    """
    head = [k, (k + 1) % n]
    return head + [i for i in range(n) if i not in head]


def _submatrix(M: Matrix, start: int, size: int) -> Matrix:
    return Matrix.from_function(M.field, size, size, lambda i, j: M[start + i, start + j])


def solve_block_split(f: MultilinearCubic, jordan: JordanData, rng: random.Random, budgets: Optional[Budgets] = None) -> WitnessTriple:
    budgets = Budgets() if budgets is None else budgets
    n = jordan.n
    if jordan.classify_target() != TargetClass.SINGLE_TWO_BLOCK:
        raise TargetNotInJn("block split expects exactly one nonzero superdiagonal entry")
    if n < 4:
        raise UnsupportedSize(f"block split needs n >= 4, got {n}")
    field = jordan.field
    target = jordan.matrix()
    [k] = jordan.nu_support()

    Q = Matrix.permutation(field, block_order(n, k))
    permuted = Q.transpose() @ target @ Q
    block = _submatrix(permuted, 0, 2)
    rest = _submatrix(permuted, 2, n - 2)

    block_witness = solve_linear_fallback(f, block, rng, budgets)
    rest_d = tuple(rest[i, i] for i in range(n - 2))
    rest_witness: Optional[WitnessTriple] = None
    if n - 2 >= 3:
        try:
            rest_witness = solve_core_jn(f, rest_d, (field.zero(),) * (n - 2), rng, budgets)
        except (CaseObstruction, SamplerExhausted) as e:
            log.info("diagonal part falls back to the linear search: %s", e)
    if rest_witness is None:
        rest_witness = solve_linear_fallback(f, rest, rng, budgets)

    arguments = [block_diag([b, r]).conjugate(Q, Q.transpose()) for b, r in zip(block_witness.arguments(), rest_witness.arguments())]
    return verify_witness(f, arguments[0], arguments[1], arguments[2], target, PathName.BLOCK_SPLIT)


class BlockSplitPath(WitnessPath):
    name = PathName.BLOCK_SPLIT

    def solve(self, f: MultilinearCubic, target: Matrix, context: SolveContext) -> WitnessTriple:
        return solve_block_split(f, jordan_coordinates(target), context.rng, context.budgets)
