"""
Witnesses for a[b,c] - lam [b,c]a

With [B, C] = diag(d) the value is A diag(d) - lam diag(d) A, so entry (i, j) is (d_j - lam d_i) A_ij and A is read off
the target entrywise. The commutator itself comes from conjugating diag(d) to a zero-diagonal matrix.
"""
import logging
import random
import dataclasses
from typing import Any, Optional

from poly_images.budgets import Budgets
from poly_images.errors import DegenerateD, InsufficientFieldSize, InvalidInput, NonzeroTrace, NotCommutatorForm, UnsupportedSize, VerificationFailed
from poly_images.fields import FieldDescriptor, FieldElement, Scalar, sample_element
from poly_images.matrices import Matrix, Vector, block_diag
from poly_images.paths.base import PathName, SolveContext, WitnessPath, WitnessTriple, verify_witness
from poly_images.polynomials import VARIABLES, MultilinearCubic

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class CommutatorMatch:
    """
    f = scale * (a[b,c] - lam [b,c]a) where a is the variable `leading` and (a, b, c) follows x -> y -> z -> x
    """

    leading: str
    lam: FieldElement
    scale: FieldElement

    @property
    def offset(self) -> int:
        return VARIABLES.index(self.leading)

    def to_primitive(self) -> dict[str, Any]:
        return {"leading": self.leading, "lambda": self.lam.to_primitive(), "scale": self.scale.to_primitive()}


def commutator_form(field: FieldDescriptor, lam: Scalar, leading: str = "x", scale: Scalar = 1) -> MultilinearCubic:
    """
    scale * (a[b,c] - lam [b,c]a) with a = leading
    """
    if leading not in VARIABLES:
        raise InvalidInput(f"leading variable must be one of {VARIABLES!r}, got {leading!r}")
    a = leading
    b = VARIABLES[(VARIABLES.index(a) + 1) % 3]
    c = VARIABLES[(VARIABLES.index(a) + 2) % 3]
    lam, scale = field.coerce(lam), field.coerce(scale)
    words = {a + b + c: scale, a + c + b: -scale, b + c + a: -scale * lam, c + b + a: scale * lam}
    return MultilinearCubic.from_words(field, words)


def match_commutator_form(f: MultilinearCubic) -> Optional[CommutatorMatch]:
    lambdas, mus = f.lambdas, f.mus
    for k, leading in enumerate(VARIABLES):
        l1, l2, l3 = lambdas[k], lambdas[(k + 1) % 3], lambdas[(k + 2) % 3]
        m1, m2, m3 = mus[k], mus[(k + 1) % 3], mus[(k + 2) % 3]
        # rotated pattern: scale * (1, -lam, 0 | lam, -1, 0)
        if l1.is_zero() or not l3.is_zero() or not m3.is_zero():
            continue
        if m2 != -l1 or m1 != -l2:
            continue
        return CommutatorMatch(leading=leading, lam=-l2 / l1, scale=l1)
    return None


def _zero_diagonal_basis(M: Matrix) -> Matrix:
    """
    P with P^-1 M P zero on the diagonal, for M of trace 0

    Picks x with x, Mx independent, completes them to a basis and recurses on the trailing block.
    """
    field = M.field
    n = M.n
    if n == 1:
        if not M[0, 0].is_zero():
            raise NonzeroTrace("1x1 block with nonzero trace")
        return Matrix.identity(field, 1)
    if all(M[i, j].is_zero() for i in range(n) for j in range(n) if i != j) and all(M[i, i] == M[0, 0] for i in range(n)):
        if M[0, 0].is_zero():
            return Matrix.identity(field, n)
        raise InsufficientFieldSize(f"a nonzero scalar {n}x{n} block has trace 0 over {field}")

    unit = Matrix.identity(field, n).columns()
    candidates = unit + [tuple(a + b for a, b in zip(unit[i], unit[j])) for i in range(n) for j in range(i + 1, n)]
    start: Optional[tuple[Vector, Vector]] = None
    for x in candidates:
        image = M.apply(x)
        if Matrix.from_columns(field, [x, image]).rank() == 2:
            start = (x, image)
            break
    assert start is not None, "every vector is an eigenvector of a non-scalar matrix"

    basis = list(start)
    for e in unit:
        if len(basis) == n:
            break
        if Matrix.from_columns(field, basis + [e]).rank() == len(basis) + 1:
            basis.append(e)
    B = Matrix.from_columns(field, basis)
    reduced = M.conjugate(B.inverse(), B)
    trailing = Matrix.from_function(field, n - 1, n - 1, lambda i, j: reduced[i + 1, j + 1])
    return B @ block_diag([Matrix.identity(field, 1), _zero_diagonal_basis(trailing)])


def _distinct_scalars(field: FieldDescriptor, n: int) -> list[FieldElement]:
    if not field.is_finite:
        return [field.from_int(i + 1) for i in range(n)]
    order = field.order()
    assert order is not None
    if order < n:
        raise InsufficientFieldSize(f"{field} has fewer than {n} distinct elements")
    return [field.from_index(i) for i in range(n)]


def commutator_realize(D: Matrix) -> tuple[Matrix, Matrix]:
    """
    (Y, Z) with YZ - ZY = D for a trace-zero D
    """
    field = D.field
    n = D.n
    if not D.trace().is_zero():
        raise NonzeroTrace(f"trace {D.trace().to_primitive()} is not zero")
    if D.is_zero():
        zero = Matrix.zeros(field, n)
        return zero, zero

    P = _zero_diagonal_basis(D)
    P_inverse = P.inverse()
    A = D.conjugate(P_inverse, P)
    betas = _distinct_scalars(field, n)
    Y0 = Matrix.diag(field, betas)
    Z0 = Matrix.from_function(field, n, n, lambda i, j: A[i, j] / (betas[i] - betas[j]) if i != j else field.zero())
    Y, Z = Y0.conjugate(P, P_inverse), Z0.conjugate(P, P_inverse)
    if Y.commutator(Z) != D:
        raise VerificationFailed("commutator does not reproduce the target")
    return Y, Z


def _sample_trace_zero(field: FieldDescriptor, n: int, rng: random.Random, box: int) -> list[FieldElement]:
    head = [sample_element(field, rng, box) for _ in range(n - 1)]
    total = field.zero()
    for e in head:
        total = total + e
    return head + [-total]


def solve_commutator_form(f: MultilinearCubic, T: Matrix, rng: random.Random, budgets: Optional[Budgets] = None) -> WitnessTriple:
    budgets = Budgets() if budgets is None else budgets
    match = match_commutator_form(f)
    if match is None:
        raise NotCommutatorForm(f"{f} is not a multiple of a[b,c] - lam [b,c]a")
    if match.lam == 1:
        raise NotCommutatorForm("lambda = 1 gives a commutator of a and [b,c], which is traceless")
    field = f.field
    n = T.n
    if n < 3:
        raise UnsupportedSize(f"the commutator construction needs n >= 3, got {n}")

    support = [(i, j) for i in range(n) for j in range(n) if not T[i, j].is_zero()]
    _distinct_scalars(field, n)
    realized: Optional[tuple[list[FieldElement], Matrix, Matrix]] = None
    for attempt in range(budgets.commutator_tries):
        d = _sample_trace_zero(field, n, rng, budgets.box)
        if any(d[j] == match.lam * d[i] for i, j in support):
            log.debug("d rejected on attempt %d", attempt + 1)
            continue
        try:
            B, C = commutator_realize(Matrix.diag(field, d))
        except InsufficientFieldSize as e:
            # a nonzero scalar d, possible when the characteristic divides n
            log.debug("d rejected on attempt %d: %s", attempt + 1, e)
            continue
        realized = (d, B, C)
        break
    if realized is None:
        raise DegenerateD(f"no realizable trace-zero d with d_j != lambda d_i on the target support within {budgets.commutator_tries} tries")
    d, B, C = realized

    A = Matrix.from_function(field, n, n, lambda i, j: T[i, j] / (match.scale * (d[j] - match.lam * d[i])) if (i, j) in support else field.zero())
    arguments: list[Matrix] = [A, A, A]
    k = match.offset
    arguments[k], arguments[(k + 1) % 3], arguments[(k + 2) % 3] = A, B, C
    log.info("commutator construction with leading variable %s and lambda %s", match.leading, match.lam.to_primitive())
    return verify_witness(f, arguments[0], arguments[1], arguments[2], T, PathName.COMMUTATOR)


class CommutatorPath(WitnessPath):
    name = PathName.COMMUTATOR

    def solve(self, f: MultilinearCubic, target: Matrix, context: SolveContext) -> WitnessTriple:
        return solve_commutator_form(f, target, context.rng, context.budgets)
