"""
Structured matrices built from two template vectors and the cyclic shift, the rejection samplers that find points where
they behave well, and the root-of-unity condition check
"""
import logging
import random
import dataclasses
from typing import Any, Optional
from collections.abc import Sequence

from poly_images.errors import DimensionMismatch, InvalidInput, PreconditionViolated, SamplerExhausted, VerificationFailed, ZeroSampleEntry
from poly_images.fields import DEFAULT_BOX, FieldDescriptor, FieldElement, nth_roots_of_unity, sample_nonzero
from poly_images.matrices import Matrix, Vector, shift_apply
from poly_images.polynomials import MultilinearCubic

log = logging.getLogger(__name__)

DEFAULT_MAX_TRIES = 64
_KEPT_DETERMINANTS = 4


@dataclasses.dataclass(frozen=True)
class StructuredSpec:
    n: int
    u: Vector
    v: Vector
    xs: Vector

    def __post_init__(self):
        if not (len(self.u) == len(self.v) == len(self.xs) == self.n):
            raise DimensionMismatch(f"u, v and xs must all have length {self.n}")


def build_structured(spec: StructuredSpec) -> Matrix:
    """
    The n x n matrix whose column j is s^j(x_j u + x_{j+1} v), indices mod n
    """
    n = spec.n
    if any(x.is_zero() for x in spec.xs):
        raise ZeroSampleEntry("structured matrices need nonzero xs")
    columns = []
    for j in range(n):
        xj, xnext = spec.xs[j], spec.xs[(j + 1) % n]
        column = tuple(xj * a + xnext * b for a, b in zip(spec.u, spec.v))
        columns.append(shift_apply(column, j))
    return Matrix.from_columns(spec.xs[0].field, columns)


def template_vectors(f: MultilinearCubic, n: int) -> tuple[Vector, Vector, Vector, Vector]:
    """
    (u', v', u, v): the templates of the diagonal system (u', v') and of the superdiagonal system (u, v)

    With X diagonal, Y a weighted cyclic superdiagonal and the third argument a weighted subdiagonal plus a diagonal,
    f(X, Y, Z) splits into a diagonal part governed by (u', v') and a superdiagonal part governed by (u, v).
    """
    if n < 2:
        raise DimensionMismatch(f"templates need n >= 2, got {n}")
    l1, l2, l3 = f.lambdas
    m1, m2, m3 = f.mus
    zero = f.field.zero()
    padding = (zero,) * (n - 2)
    return (
        (l1 + l2, l3) + padding,
        (m3, m1 + m2) + padding,
        (m2 + l3, l1) + padding,
        (m1, l2 + m3) + padding,
    )


def shifts_independent(u: Sequence[FieldElement], start: int = 1) -> bool:
    """
    Whether s^start u, ..., s^(n-1) u are linearly independent
    """
    n = len(u)
    shifted = [shift_apply(u, j) for j in range(start, n)]
    if not shifted:
        return True
    return Matrix.from_columns(u[0].field, shifted).rank() == len(shifted)


def _sample_xs(field: FieldDescriptor, n: int, rng: random.Random, box: int) -> Vector:
    return tuple(sample_nonzero(field, rng, box) for _ in range(n))


def sample_invertible_point(
    u: Vector, v: Vector, n: int, rng: random.Random, max_tries: int = DEFAULT_MAX_TRIES, box: int = DEFAULT_BOX
) -> Vector:
    field = u[0].field
    determinants: list[str] = []
    for attempt in range(max_tries):
        xs = _sample_xs(field, n, rng, box)
        determinant = build_structured(StructuredSpec(n, u, v, xs)).det()
        if not determinant.is_zero():
            log.debug("invertible point found after %d tries", attempt + 1)
            return xs
        determinants = (determinants + [str(determinant.to_primitive())])[-_KEPT_DETERMINANTS:]
    log.debug("no invertible point within %d tries", max_tries)
    raise SamplerExhausted(f"no invertible structured matrix within {max_tries} tries", last_determinants=determinants)


def _good_kernel(a: Matrix) -> tuple[bool, Optional[Vector]]:
    kernel = a.kernel_basis()
    if not kernel:
        return True, None
    if len(kernel) == 1 and all(not e.is_zero() for e in kernel[0]):
        return True, kernel[0]
    return False, None


def _check_kernel_precondition(u: Vector, v: Vector):
    if not (shifts_independent(u) or shifts_independent(v)):
        raise PreconditionViolated("neither template has independent shifts")


def sample_good_kernel_point(
    u: Vector, v: Vector, n: int, rng: random.Random, max_tries: int = DEFAULT_MAX_TRIES, box: int = DEFAULT_BOX
) -> tuple[Vector, Optional[Vector]]:
    """
    xs where the kernel of the structured matrix is trivial (None) or spanned by a vector without zero entries
    """
    _check_kernel_precondition(u, v)
    field = u[0].field
    for attempt in range(max_tries):
        xs = _sample_xs(field, n, rng, box)
        good, kernel = _good_kernel(build_structured(StructuredSpec(n, u, v, xs)))
        if good:
            log.debug("good kernel point found after %d tries", attempt + 1)
            return xs, kernel
    raise SamplerExhausted(f"no point with a good kernel within {max_tries} tries")


def sample_intersection_point(
    u_diag: Vector,
    v_diag: Vector,
    u: Vector,
    v: Vector,
    n: int,
    rng: random.Random,
    max_tries: int = DEFAULT_MAX_TRIES,
    box: int = DEFAULT_BOX,
    need_kernel: bool = True,
) -> tuple[Vector, Matrix, Matrix, Optional[Vector]]:
    """
    One xs per draw, accepted when the (u_diag, v_diag) matrix is invertible and, if asked, the (u, v) matrix has a good kernel

    Returns xs, both structured matrices and the kernel vector (None for a trivial kernel or when the kernel is not needed).
    """
    if need_kernel:
        _check_kernel_precondition(u, v)
    field = u[0].field
    determinants: list[str] = []
    for attempt in range(max_tries):
        xs = _sample_xs(field, n, rng, box)
        a_diag = build_structured(StructuredSpec(n, u_diag, v_diag, xs))
        determinant = a_diag.det()
        if determinant.is_zero():
            determinants = (determinants + [str(determinant.to_primitive())])[-_KEPT_DETERMINANTS:]
            continue
        a = build_structured(StructuredSpec(n, u, v, xs))
        kernel = None
        if need_kernel:
            good, kernel = _good_kernel(a)
            if not good:
                continue
        log.debug("intersection point found after %d tries", attempt + 1)
        return xs, a_diag, a, kernel
    log.debug("intersection sampler exhausted after %d tries", max_tries)
    raise SamplerExhausted(f"no point in both sampling sets within {max_tries} tries", last_determinants=determinants)


def root_condition_value(omega: FieldElement, eta: FieldElement, theta: FieldElement) -> FieldElement:
    return omega * eta * theta - omega - eta - theta + 2


def root_condition_factored(omega: FieldElement, eta: FieldElement, theta: FieldElement) -> FieldElement:
    """
    The same value written through 1/(1 - r); only defined for roots different from 1
    """
    a, b, c = 1 - omega, 1 - eta, 1 - theta
    return a * b * c * (a.inverse() + b.inverse() + c.inverse() - 1)


@dataclasses.dataclass(frozen=True)
class ConditionVerdict:
    holds: bool
    witness: Optional[tuple[FieldElement, FieldElement, FieldElement]] = None

    def __post_init__(self):
        if not self.holds:
            if self.witness is None or not root_condition_value(*self.witness).is_zero():
                raise VerificationFailed("a failing verdict needs a vanishing witness")

    def to_primitive(self) -> dict[str, Any]:
        result: dict[str, Any] = {"holds": self.holds}
        if self.witness is not None:
            result["witness"] = [e.to_primitive() for e in self.witness]
        return result


def check_root_condition(field: FieldDescriptor, n: int) -> ConditionVerdict:
    """
    Whether omega*eta*theta - omega - eta - theta + 2 is nonzero for all n-th roots of unity other than 1 in the field

    The reported witness is the lexicographically first vanishing triple in root order. For each (omega, eta) the
    vanishing theta is unique unless omega*eta = 1, so the search is quadratic.
    """
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    roots = [r for r in nth_roots_of_unity(field, n) if r != 1]
    position = {r: i for i, r in enumerate(roots)}
    for omega in roots:
        for eta in roots:
            denominator = omega * eta - 1
            numerator = omega + eta - 2
            if denominator.is_zero():
                if numerator.is_zero():
                    return ConditionVerdict(False, (omega, eta, roots[0]))
                continue
            theta = numerator / denominator
            if theta in position:
                return ConditionVerdict(False, (omega, eta, theta))
    return ConditionVerdict(True)


def trivial_roots_regime(field: FieldDescriptor, n: int) -> bool:
    """
    True when 1 is the only n-th root of unity in the field, so the root condition holds vacuously
    """
    return len(nth_roots_of_unity(field, n)) == 1


def root_condition_counterexample(p: int, n: int) -> tuple[FieldElement, FieldElement, FieldElement]:
    """
    A vanishing triple in GF(p) when p - 1 divides n, so that every nonzero residue is an n-th root of unity
    """
    if p < 5 or n < 1 or n % (p - 1) != 0:
        raise PreconditionViolated(f"need a prime p >= 5 with p - 1 dividing n, got p={p}, n={n}")
    field = FieldDescriptor.finite(p)
    omega = field.from_int(2)
    excluded = {omega.inverse(), 2 - omega}
    eta = next(field.from_int(i) for i in range(2, p) if field.from_int(i) not in excluded)
    theta = (omega + eta - 2) / (omega * eta - 1)
    # theta = 1 would force (omega - 1)(eta - 1) = 0
    assert theta != 1 and not theta.is_zero()
    for root in (omega, eta, theta):
        assert root**n == 1
    assert root_condition_value(omega, eta, theta).is_zero()
    return omega, eta, theta


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
