"""
Witness search dispatch

Targets are brought to Jordan coordinates, solved there by the structured construction or the block split, and the
witness is conjugated back; f(P X P^-1, P Y P^-1, P Z P^-1) = P f(X, Y, Z) P^-1 for any invertible P.
"""
import logging
import random
from typing import Optional

from poly_images.budgets import Budgets
from poly_images.config import Config
from poly_images.errors import CaseObstruction, SamplerExhausted, TargetUnsplittable, Unsplittable, UnsupportedSize
from poly_images.jordan import JordanData, TargetClass, jordan_form
from poly_images.matrices import Matrix
from poly_images.paths.base import PathName, SolveContext, WitnessTriple, verify_witness
from poly_images.paths.commutator import match_commutator_form
from poly_images.polynomials import MultilinearCubic
from poly_images.registry import PathRegistry

log = logging.getLogger(__name__)

# failures that mean "this construction does not apply", not "T is outside the image"
_ROUTED_TO_FALLBACK = (CaseObstruction, SamplerExhausted, UnsupportedSize)


def make_context(rng: random.Random, budgets: Optional[Budgets] = None, paths: Optional[PathRegistry] = None) -> SolveContext:
    builtin = Config.builtin()
    return SolveContext(rng=rng, budgets=builtin.budgets if budgets is None else budgets, paths=builtin.paths if paths is None else paths)


def _jordan_path(jordan: JordanData) -> str:
    return "block_split" if jordan.classify_target() == TargetClass.SINGLE_TWO_BLOCK else "core"


def solve_jordan(f: MultilinearCubic, jordan: JordanData, rng: random.Random, context: Optional[SolveContext] = None) -> WitnessTriple:
    """
    Witness for the Jordan-coordinate matrix of `jordan`; P, if present, is ignored
    """
    context = make_context(rng) if context is None else context
    name = _jordan_path(jordan)
    log.info("solving Jordan target (%s) through %s", jordan.classify_target().value, name)
    return context.paths.solve(name, f, jordan.matrix(), context)


def solve_general(f: MultilinearCubic, T: Matrix, rng: random.Random, context: Optional[SolveContext] = None) -> WitnessTriple:
    context = make_context(rng) if context is None else context
    field = f.field
    n = T.n

    if T.is_zero():
        zero = Matrix.zeros(field, n)
        return verify_witness(f, zero, zero, zero, T, PathName.CORE)

    lambda_sum, mu_sum = f.coefficient_sums()
    if lambda_sum.is_zero() and mu_sum.is_zero():
        log.info("image is traceless at best; only the linear search applies")
        return context.paths.solve("fallback", f, T, context)

    match = match_commutator_form(f)
    if match is not None and match.lam != 1 and n >= 3:
        return context.paths.solve("commutator", f, T, context)

    try:
        jordan = jordan_form(T)
    except Unsplittable as e:
        raise TargetUnsplittable(str(e)) from e
    assert jordan.P is not None

    try:
        witness = solve_jordan(f, jordan, context.rng, context)
    except _ROUTED_TO_FALLBACK as e:
        log.info("%s: falling back to the linear search", e.code)
        return context.paths.solve("fallback", f, T, context)

    P = jordan.P
    P_inverse = P.inverse()
    X, Y, Z = (M.conjugate(P, P_inverse) for M in witness.arguments())
    return verify_witness(f, X, Y, Z, T, witness.path)


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
