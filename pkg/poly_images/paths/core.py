"""
Structured witnesses for targets in J_n

X is diagonal, Y is a weighted cyclic superdiagonal and the third argument is a weighted cyclic subdiagonal plus a
diagonal. The diagonal part of the target then becomes one linear system in the subdiagonal weights, the superdiagonal
part a second one in the diagonal of the third argument.
"""
import logging
import random
from typing import Optional, Union
from collections.abc import Sequence

from poly_images.budgets import Budgets
from poly_images.classifier import ROTATIONS, rotation_cases
from poly_images.errors import CaseObstruction, Exhausted, PreconditionViolated, SamplerExhausted, TargetNotInJn, UnsupportedSize, VerificationFailed
from poly_images.fields import FieldElement, nth_roots_of_unity, sample_nonzero
from poly_images.jordan import JordanData
from poly_images.matrices import Matrix, Vector
from poly_images.paths.base import PathName, SolveContext, WitnessPath, WitnessTriple, verify_witness
from poly_images.polynomials import ALL_PERMUTATIONS, MultilinearCubic, Permutation, is_cyclic, permute_arguments
from poly_images.structured import sample_intersection_point, template_vectors

log = logging.getLogger(__name__)


def working_permutations(f: MultilinearCubic, n: int) -> list[Permutation]:
    """
    Variable permutations sigma for which the structured construction applies to permute_variables(f, sigma)

    Cyclic permutations come first when the lambda sum is nonzero, the ones exchanging the two families otherwise.
    """
    lambda_sum, _ = f.coefficient_sums()
    preferred = sorted(ALL_PERMUTATIONS, key=lambda sigma: is_cyclic(sigma) == lambda_sum.is_zero())
    roots = nth_roots_of_unity(f.field, n)
    usable = []
    for sigma in preferred:
        if not rotation_cases(f.permute_variables(sigma), ROTATIONS["id"], roots).any:
            usable.append(sigma)
    return usable


def _eta_for_kernel(support: Sequence[int], kernel: Vector, rng: random.Random, budgets: Budgets) -> list[FieldElement]:
    # eta lives on the support and is orthogonal to the kernel vector; the last support entry is solved for
    field = kernel[0].field
    n = len(kernel)
    *free, last = support
    free_values = [field.one()] * len(free)
    for _ in range(budgets.max_tries):
        partial = field.zero()
        for i, value in zip(free, free_values):
            partial = partial + value * kernel[i]
        solved = -partial / kernel[last]
        if not solved.is_zero():
            eta = [field.zero()] * n
            for i, value in zip(free, free_values):
                eta[i] = value
            eta[last] = solved
            return eta
        free_values = [sample_nonzero(field, rng, budgets.box) for _ in free]
    raise SamplerExhausted(f"no eta with full support within {budgets.max_tries} tries")


def _core_attempt(g: MultilinearCubic, d: Vector, nu: Vector, rng: random.Random, budgets: Budgets) -> tuple[Matrix, Matrix, Matrix]:
    field = g.field
    n = len(d)
    u_diag, v_diag, u, v = template_vectors(g, n)
    support = [i for i, value in enumerate(nu) if not value.is_zero()]
    try:
        xs, a_diag, a, kernel = sample_intersection_point(u_diag, v_diag, u, v, n, rng, budgets.max_tries, budgets.box, need_kernel=bool(support))
    except PreconditionViolated as e:
        raise CaseObstruction(str(e)) from e

    z = a_diag.solve(d)
    one, zero = field.one(), field.zero()
    ys = [one] * n
    if not support:
        w: Sequence[FieldElement] = [zero] * n
    elif kernel is None:
        w = a.transpose().solve(nu)
    else:
        eta = _eta_for_kernel(support, kernel, rng, budgets)
        for i in support:
            ys[i] = nu[i] / eta[i]
        w = a.transpose().solve(eta)

    superdiagonal = a.transpose().apply(w)
    if any(y * s != target for y, s, target in zip(ys, superdiagonal, nu)):
        raise VerificationFailed("superdiagonal system does not reproduce nu")

    X = Matrix.diag(field, xs)
    Y = Matrix.weighted_cyclic(field, ys, 1)
    lower = Matrix.weighted_cyclic(field, [z[(i - 1) % n] / ys[(i - 1) % n] for i in range(n)], -1)
    Z = lower + Matrix.diag(field, w)
    return X, Y, Z


def solve_core_jn(
    f: MultilinearCubic, d: Sequence[FieldElement], nu: Sequence[FieldElement], rng: random.Random, budgets: Optional[Budgets] = None
) -> WitnessTriple:
    budgets = Budgets() if budgets is None else budgets
    jordan = JordanData(d=tuple(d), nu=tuple(nu))
    n = jordan.n
    if n < 3:
        raise UnsupportedSize(f"the structured construction needs n >= 3, got {n}")
    if len(jordan.nu_support()) == 1:
        raise TargetNotInJn(f"exactly one superdiagonal entry is nonzero (position {jordan.nu_support()[0]})")

    permutations = working_permutations(f, n)
    if not permutations:
        raise CaseObstruction("every variable permutation meets a blocking case")
    last_error: Optional[Union[Exhausted, CaseObstruction]] = None
    for sigma in permutations:
        g = f.permute_variables(sigma)
        try:
            arguments = _core_attempt(g, jordan.d, jordan.nu, rng, budgets)
        except (SamplerExhausted, CaseObstruction) as e:
            log.debug("core construction failed for permutation %s: %s", sigma, e)
            last_error = e
            continue
        X, Y, Z = permute_arguments(arguments, sigma)
        log.info("core construction succeeded with permutation %s", sigma)
        return verify_witness(f, X, Y, Z, jordan.matrix(), PathName.CORE)
    assert last_error is not None
    raise last_error


def jordan_coordinates(target: Matrix) -> JordanData:
    """
    Read d and nu off a matrix supported on the diagonal and the cyclic superdiagonal
    """
    n = target.n
    for i in range(n):
        for j in range(n):
            if i != j and j != (i + 1) % n and not target[i, j].is_zero():
                raise TargetNotInJn(f"entry ({i}, {j}) is off the diagonal and the cyclic superdiagonal")
    if n == 1:
        return JordanData(d=(target[0, 0],), nu=(target.field.zero(),))
    return JordanData(d=tuple(target[i, i] for i in range(n)), nu=tuple(target[i, (i + 1) % n] for i in range(n)))


class CorePath(WitnessPath):
    name = PathName.CORE

    def solve(self, f: MultilinearCubic, target: Matrix, context: SolveContext) -> WitnessTriple:
        jordan = jordan_coordinates(target)
        return solve_core_jn(f, jordan.d, jordan.nu, context.rng, context.budgets)


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
