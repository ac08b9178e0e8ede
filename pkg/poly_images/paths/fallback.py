"""
Randomized linear search: fix two arguments, solve for the third

f is linear in each argument separately, so with two arguments fixed the target is reached iff vec(T) lies in the
column space of an n^2 x n^2 matrix. Running out of rounds says nothing about whether T is in the image.
"""
import enum
import logging
import random
from typing import Optional

from poly_images.budgets import Budgets
from poly_images.errors import Exhausted, Inconsistent
from poly_images.fields import sample_nonzero
from poly_images.matrices import Matrix, random_matrix
from poly_images.paths.base import PathName, SolveContext, WitnessPath, WitnessTriple, verify_witness
from poly_images.polynomials import VARIABLES, MultilinearCubic

log = logging.getLogger(__name__)

# the solved argument moves through these in turn
SLOTS = ("z", "x", "y")


class Strategy(str, enum.Enum):
    DENSE = "dense"
    UNIT_AGAINST_DIAGONAL = "unit-against-diagonal"
    WEIGHTED_CYCLIC = "weighted-cyclic"


STRATEGIES = tuple(Strategy)


def _sample_pair(strategy: Strategy, f: MultilinearCubic, n: int, rng: random.Random, box: int) -> tuple[Matrix, Matrix]:
    field = f.field
    if strategy == Strategy.DENSE:
        return random_matrix(field, n, rng, box), random_matrix(field, n, rng, box)
    if strategy == Strategy.UNIT_AGAINST_DIAGONAL:
        unit = Matrix.unit(field, n, rng.randrange(n), rng.randrange(n)).scale(sample_nonzero(field, rng, box))
        diagonal = Matrix.diag(field, [sample_nonzero(field, rng, box) for _ in range(n)])
        return (unit, diagonal) if rng.random() < 0.5 else (diagonal, unit)
    first = Matrix.weighted_cyclic(field, [sample_nonzero(field, rng, box) for _ in range(n)], rng.randrange(n))
    second = Matrix.weighted_cyclic(field, [sample_nonzero(field, rng, box) for _ in range(n)], rng.randrange(n))
    return first, second


def round_plan(round_index: int) -> tuple[Optional[Strategy], str]:
    """
    Sampling strategy and solved slot for one round; round 0 fixes both arguments to the identity
    """
    if round_index == 0:
        return None, "z"
    k = round_index - 1
    return STRATEGIES[k % len(STRATEGIES)], SLOTS[(k // len(STRATEGIES)) % len(SLOTS)]


def solve_linear_fallback(f: MultilinearCubic, T: Matrix, rng: random.Random, budgets: Optional[Budgets] = None) -> WitnessTriple:
    budgets = Budgets() if budgets is None else budgets
    field = f.field
    n = T.n
    rhs = T.vec()
    for round_index in range(budgets.fallback_tries):
        strategy, slot = round_plan(round_index)
        if strategy is None:
            identity = Matrix.identity(field, n)
            A, B = identity, identity
        else:
            A, B = _sample_pair(strategy, f, n, rng, budgets.box)
        try:
            solution = f.linear_map_in_slot(slot, A, B).solve(rhs)
        except Inconsistent:
            continue
        arguments = dict(zip([v for v in VARIABLES if v != slot], (A, B)))
        arguments[slot] = Matrix.unvec(field, solution, n)
        log.info("linear search hit in round %d (%s, solving for %s)", round_index, strategy.value if strategy else "identity", slot)
        return verify_witness(f, arguments["x"], arguments["y"], arguments["z"], T, PathName.FALLBACK)
    log.warning("linear search found no witness in %d rounds", budgets.fallback_tries)
    raise Exhausted(f"no witness within {budgets.fallback_tries} rounds; this says nothing about membership")


class FallbackPath(WitnessPath):
    name = PathName.FALLBACK

    def solve(self, f: MultilinearCubic, target: Matrix, context: SolveContext) -> WitnessTriple:
        return solve_linear_fallback(f, target, context.rng, context.budgets)
