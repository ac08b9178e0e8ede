import itertools
import logging
import dataclasses
from typing import Any, Optional
from collections.abc import Sequence

from poly_images.errors import DescriptorMismatch, DimensionMismatch, InvalidInput
from poly_images.fields import FieldDescriptor, FieldElement, Scalar
from poly_images.matrices import Matrix, kron

log = logging.getLogger(__name__)

VARIABLES = "xyz"
# lambda_1..3 then mu_1..3
MONOMIALS = ("xyz", "yzx", "zxy", "zyx", "xzy", "yxz")

Permutation = tuple[int, int, int]

IDENTITY: Permutation = (0, 1, 2)
# (x, y, z) -> (y, z, x)
ROTATE: Permutation = (1, 2, 0)
ROTATE2: Permutation = (2, 0, 1)
SWAP_XZ: Permutation = (2, 1, 0)
ALL_PERMUTATIONS: tuple[Permutation, ...] = tuple(itertools.permutations(range(3)))  # type: ignore[arg-type]


def compose_permutations(sigma: Permutation, tau: Permutation) -> Permutation:
    """
    The permutation applied by permute_variables(permute_variables(f, sigma), tau)
    """
    return (tau[sigma[0]], tau[sigma[1]], tau[sigma[2]])


def invert_permutation(sigma: Permutation) -> Permutation:
    inverse = [0, 0, 0]
    for i, s in enumerate(sigma):
        inverse[s] = i
    return (inverse[0], inverse[1], inverse[2])


def permute_arguments(arguments: Sequence[Any], sigma: Permutation) -> tuple[Any, Any, Any]:
    """
    Turn arguments of permute_variables(f, sigma) into arguments of f with the same value
    """
    return (arguments[sigma[0]], arguments[sigma[1]], arguments[sigma[2]])


def is_cyclic(sigma: Permutation) -> bool:
    return sigma in (IDENTITY, ROTATE, ROTATE2)


def _relabel(word: str, sigma: Permutation) -> str:
    return "".join(VARIABLES[sigma[VARIABLES.index(c)]] for c in word)


@dataclasses.dataclass(frozen=True)
class MultilinearCubic:
    """
    f(x,y,z) = l1 xyz + l2 yzx + l3 zxy + m1 zyx + m2 xzy + m3 yxz
    """

    coefficients: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coefficients) != len(MONOMIALS):
            raise InvalidInput(f"a multilinear cubic has {len(MONOMIALS)} coefficients, got {len(self.coefficients)}")
        field = self.coefficients[0].field
        if any(c.field != field for c in self.coefficients):
            raise DescriptorMismatch("coefficients over different fields")

    @classmethod
    def from_coefficients(cls, field: FieldDescriptor, coefficients: Sequence[Scalar]) -> "MultilinearCubic":
        return cls(tuple(field.coerce(c) for c in coefficients))

    @classmethod
    def from_words(cls, field: FieldDescriptor, words: dict[str, Scalar]) -> "MultilinearCubic":
        unknown = set(words) - set(MONOMIALS)
        if unknown:
            raise InvalidInput(f"unknown monomials {sorted(unknown)}")
        return cls.from_coefficients(field, [words.get(word, 0) for word in MONOMIALS])

    @property
    def field(self) -> FieldDescriptor:
        return self.coefficients[0].field

    @property
    def lambdas(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        return self.coefficients[0], self.coefficients[1], self.coefficients[2]

    @property
    def mus(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        return self.coefficients[3], self.coefficients[4], self.coefficients[5]

    def coefficient(self, word: str) -> FieldElement:
        return self.coefficients[MONOMIALS.index(word)]

    def words(self) -> dict[str, FieldElement]:
        return dict(zip(MONOMIALS, self.coefficients))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def coefficient_sums(self) -> tuple[FieldElement, FieldElement]:
        l1, l2, l3 = self.lambdas
        m1, m2, m3 = self.mus
        return l1 + l2 + l3, m1 + m2 + m3

    def total_sum(self) -> FieldElement:
        lambda_sum, mu_sum = self.coefficient_sums()
        return lambda_sum + mu_sum

    def scale(self, c: Scalar) -> "MultilinearCubic":
        c = self.field.coerce(c)
        return MultilinearCubic(tuple(c * a for a in self.coefficients))

    def permute_variables(self, sigma: Permutation) -> "MultilinearCubic":
        """
        g with g(B0, B1, B2) = f(B_sigma[0], B_sigma[1], B_sigma[2])
        """
        if sorted(sigma) != [0, 1, 2]:
            raise InvalidInput(f"{sigma} is not a permutation of (0, 1, 2)")
        relabeled = {_relabel(word, sigma): c for word, c in self.words().items()}
        return MultilinearCubic(tuple(relabeled[word] for word in MONOMIALS))

    def _check_arguments(self, matrices: Sequence[Matrix]):
        size = matrices[0].rows
        for M in matrices:
            if M.field != self.field:
                raise DescriptorMismatch(f"matrix over {M.field} for a polynomial over {self.field}")
            if not M.is_square or M.rows != size:
                raise DimensionMismatch("arguments must be square matrices of one size")

    def eval(self, X: Matrix, Y: Matrix, Z: Matrix) -> Matrix:
        self._check_arguments([X, Y, Z])
        arguments = dict(zip(VARIABLES, (X, Y, Z)))
        pairs: dict[str, Matrix] = {}
        result = Matrix.zeros(self.field, X.rows)
        for word, c in self.words().items():
            if c.is_zero():
                continue
            prefix = word[:2]
            if prefix not in pairs:
                pairs[prefix] = arguments[prefix[0]] @ arguments[prefix[1]]
            result = result + (pairs[prefix] @ arguments[word[2]]).scale(c)
        return result

    def linear_map(self, slot: str, fixed: dict[str, Matrix]) -> Matrix:
        """
        The n^2 x n^2 matrix of B -> f(...) with `slot` the free variable and the other two taken from `fixed`

        Uses row-major vec, where vec(M B N) = (M kron N^T) vec(B).
        """
        others = [v for v in VARIABLES if v != slot]
        self._check_arguments([fixed[v] for v in others])
        n = fixed[others[0]].rows
        identity = Matrix.identity(self.field, n)
        result = Matrix.zeros(self.field, n * n)
        for word, c in self.words().items():
            if c.is_zero():
                continue
            left, _, right = word.partition(slot)
            M = identity
            for letter in left:
                M = M @ fixed[letter]
            N = identity
            for letter in right:
                N = N @ fixed[letter]
            result = result + kron(M, N.transpose()).scale(c)
        return result

    def linear_map_in_z(self, X: Matrix, Y: Matrix) -> Matrix:
        return self.linear_map("z", {"x": X, "y": Y})

    def linear_map_in_slot(self, slot: str, A: Matrix, B: Matrix) -> Matrix:
        """
        Linear map in `slot` with the remaining two variables, in x, y, z order, set to A and B
        """
        others = [v for v in VARIABLES if v != slot]
        return self.linear_map(slot, dict(zip(others, (A, B))))

    def to_primitive(self) -> dict[str, Any]:
        result: dict[str, Any] = {"field": self.field.to_primitive()}
        result.update({word: c.to_primitive() for word, c in self.words().items()})
        return result

    @classmethod
    def from_primitive(cls, primitive: Any, field: Optional[FieldDescriptor] = None, location: str = "poly") -> "MultilinearCubic":
        if not isinstance(primitive, dict):
            raise InvalidInput("polynomial must be an object keyed by monomials", location=location)
        if "field" in primitive:
            declared = FieldDescriptor.from_primitive(primitive["field"], location=f"{location}.field")
            if field is not None and declared != field:
                raise InvalidInput(f"polynomial is over {declared}, expected {field}", location=f"{location}.field")
            field = declared
        if field is None:
            raise InvalidInput("polynomial has no field", location=location)
        words = {key: value for key, value in primitive.items() if key != "field"}
        unknown = sorted(set(words) - set(MONOMIALS))
        if unknown:
            raise InvalidInput(f"unknown monomials {unknown}", location=f"{location}.{unknown[0]}")
        return cls(tuple(field.parse_element(words.get(word, 0), location=f"{location}.{word}") for word in MONOMIALS))

    def __str__(self):
        terms = [f"({c.to_primitive()})*{word}" for word, c in self.words().items() if not c.is_zero()]
        return " + ".join(terms) if terms else "0"


def eval_poly(f: MultilinearCubic, X: Matrix, Y: Matrix, Z: Matrix) -> Matrix:
    return f.eval(X, Y, Z)


def coefficient_sums(f: MultilinearCubic) -> tuple[FieldElement, FieldElement]:
    return f.coefficient_sums()


def permute_variables(f: MultilinearCubic, sigma: Permutation) -> MultilinearCubic:
    return f.permute_variables(sigma)


def linear_map_in_z(f: MultilinearCubic, X: Matrix, Y: Matrix) -> Matrix:
    return f.linear_map_in_z(X, Y)


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
