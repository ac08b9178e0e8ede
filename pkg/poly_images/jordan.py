"""
Jordan normal form over the supported fields

Eigenvalues are found only where the search is decidable: rational roots over Q, rational multiples of roots of unity over
Q(zeta_n), exhaustive search over GF(p^k). Anything else is reported as Unsplittable.
"""
import enum
import logging
import dataclasses
from fractions import Fraction
from typing import Any, Optional
from collections.abc import Sequence

import sympy

from poly_images.errors import InvalidInput, Unsplittable, VerificationFailed
from poly_images.fields import FieldDescriptor, FieldElement, FieldKind, nth_roots_of_unity
from poly_images.matrices import Matrix, Vector

log = logging.getLogger(__name__)

_X = sympy.Symbol("x")


class TargetClass(str, enum.Enum):
    IN_JN = "InJn"
    SINGLE_TWO_BLOCK = "SingleTwoBlock"


@dataclasses.dataclass(frozen=True)
class JordanData:
    """
    A target in Jordan coordinates: sum d_i e_ii + sum nu_i e_{i,i+1 mod n}

    nu[n-1] is the wraparound slot; genuine Jordan forms leave it zero. P maps Jordan coordinates back, M = P J P^-1.
    """

    d: tuple[FieldElement, ...]
    nu: tuple[FieldElement, ...]
    P: Optional[Matrix] = None

    def __post_init__(self):
        if len(self.d) != len(self.nu):
            raise InvalidInput(f"d has {len(self.d)} entries but nu has {len(self.nu)}")

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def field(self) -> FieldDescriptor:
        return self.d[0].field

    def matrix(self) -> Matrix:
        n = self.n
        rows = [[self.field.zero()] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = self.d[i]
        for i in range(n):
            j = (i + 1) % n
            rows[i][j] = rows[i][j] + self.nu[i]
        return Matrix(self.field, rows)

    def nu_support(self) -> list[int]:
        return [i for i, v in enumerate(self.nu) if not v.is_zero()]

    def classify_target(self) -> TargetClass:
        return TargetClass.SINGLE_TWO_BLOCK if len(self.nu_support()) == 1 else TargetClass.IN_JN

    def to_primitive(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "d": [e.to_primitive() for e in self.d],
            "nu": [e.to_primitive() for e in self.nu],
            "class": self.classify_target().value,
        }
        if self.P is not None:
            result["P"] = self.P.to_primitive()
        return result

    @classmethod
    def from_primitive(cls, primitive: Any, field: FieldDescriptor, location: str = "target") -> "JordanData":
        if not isinstance(primitive, dict) or "d" not in primitive:
            raise InvalidInput("Jordan target must be an object with d and nu", location=location)
        d = primitive["d"]
        nu = primitive.get("nu", [0] * len(d) if isinstance(d, list) else None)
        if not isinstance(d, list) or not isinstance(nu, list) or not d:
            raise InvalidInput("d and nu must be non-empty lists", location=location)
        return cls(
            d=tuple(field.parse_element(e, location=f"{location}.d[{i}]") for i, e in enumerate(d)),
            nu=tuple(field.parse_element(e, location=f"{location}.nu[{i}]") for i, e in enumerate(nu)),
        )


def _evaluate(poly: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    acc = x.field.zero()
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _deflate(poly: list[FieldElement], root: FieldElement) -> list[FieldElement]:
    # synthetic division by (x - root); the remainder is known to vanish
    quotient = [root.field.zero()] * (len(poly) - 1)
    carry = root.field.zero()
    for k in range(len(poly) - 1, 0, -1):
        carry = carry * root + poly[k]
        quotient[k - 1] = carry
    return quotient


def _sympy_poly(coeffs: Sequence[Fraction]) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _X, domain=sympy.QQ)


def _rational_roots(poly: sympy.Poly) -> list[Fraction]:
    if poly.is_zero or poly.degree() < 1:
        return []
    roots = [Fraction(int(r.p), int(r.q)) for r in poly.ground_roots()]
    return sorted(roots, key=lambda r: (abs(r), r < 0))


def _candidate_roots(charpoly: list[FieldElement]) -> list[FieldElement]:
    field = charpoly[0].field
    if field.kind == FieldKind.FINITE:
        return [e for e in field.elements() if _evaluate(charpoly, e).is_zero()]
    if field.kind == FieldKind.RATIONALS:
        return [field.from_fraction(r) for r in _rational_roots(_sympy_poly([c.value for c in charpoly]))]

    # roots c * w with c rational and w a root of unity: each coordinate of p(c w) is a rational polynomial in c
    group_order = field.n if field.n % 2 == 0 else 2 * field.n
    candidates: list[FieldElement] = []
    for w in nth_roots_of_unity(field, group_order):
        twisted = [c * w**k for k, c in enumerate(charpoly)]
        common: Optional[sympy.Poly] = None
        for t in range(field.degree):
            component = _sympy_poly([c.value[t] for c in twisted])
            common = component if common is None else common.gcd(component)
        assert common is not None
        for r in _rational_roots(common):
            root = w * field.from_fraction(r)
            if root not in candidates:
                candidates.append(root)
    return candidates


def eigenvalues(M: Matrix) -> list[tuple[FieldElement, int]]:
    """
    Eigenvalues with algebraic multiplicities, in discovery order

    Raises Unsplittable when the characteristic polynomial does not split over the searched candidates.
    """
    charpoly = M.charpoly()
    remaining = list(charpoly)
    result = []
    for root in _candidate_roots(charpoly):
        multiplicity = 0
        while len(remaining) > 1 and _evaluate(remaining, root).is_zero():
            remaining = _deflate(remaining, root)
            multiplicity += 1
        if multiplicity:
            result.append((root, multiplicity))
    if len(remaining) > 1:
        raise Unsplittable(f"characteristic polynomial does not split into linear factors over {M.field}")
    return result


def _independent_extension(basis: list[Vector], candidates: Sequence[Vector], needed: int) -> list[Vector]:
    chosen: list[Vector] = []
    if needed <= 0:
        return chosen
    current = list(basis)
    rank = Matrix.from_columns(candidates[0][0].field, current).rank() if current else 0
    for v in candidates:
        trial = current + [v]
        trial_rank = Matrix.from_columns(v[0].field, trial).rank()
        if trial_rank > rank:
            current, rank = trial, trial_rank
            chosen.append(v)
            if len(chosen) == needed:
                break
    return chosen


def _jordan_chains(M: Matrix, eigenvalue: FieldElement, multiplicity: int) -> list[list[Vector]]:
    n = M.n
    N = M - Matrix.identity(M.field, n).scale(eigenvalue)
    kernels: list[list[Vector]] = [[]]
    power = Matrix.identity(M.field, n)
    while len(kernels[-1]) < multiplicity:
        power = power @ N
        kernels.append(power.kernel_basis())
        if len(kernels) > n + 1:
            raise VerificationFailed("generalized eigenspace does not stabilize")
    top = len(kernels) - 1

    chains: list[list[Vector]] = []
    for level in range(top, 0, -1):
        # vectors already accounted for at this level: the lower kernel and the images of longer chains
        carried = [chain[len(chain) - level] for chain in chains]
        needed = len(kernels[level]) - len(kernels[level - 1]) - len(carried)
        for head in _independent_extension(kernels[level - 1] + carried, kernels[level], needed):
            chain = [head]
            for _ in range(level - 1):
                chain.append(N.apply(chain[-1]))
            chains.append(chain)
    # each chain is [v, Nv, ..., N^(k-1) v]; Jordan order puts the eigenvector first
    return [list(reversed(chain)) for chain in chains]


def jordan_form(M: Matrix) -> JordanData:
    n = M.n
    field = M.field
    columns: list[Vector] = []
    d: list[FieldElement] = []
    nu: list[FieldElement] = []
    for eigenvalue, multiplicity in eigenvalues(M):
        for chain in _jordan_chains(M, eigenvalue, multiplicity):
            columns.extend(chain)
            d.extend([eigenvalue] * len(chain))
            nu.extend([field.one()] * (len(chain) - 1) + [field.zero()])
    P = Matrix.from_columns(field, columns)
    data = JordanData(d=tuple(d), nu=tuple(nu), P=P)
    if P @ data.matrix() != M @ P:
        raise VerificationFailed("Jordan basis does not reproduce the matrix")
    log.debug("Jordan form of %dx%d matrix: d=%s nu=%s", n, n, [e.to_primitive() for e in d], [e.to_primitive() for e in nu])
    return data


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
