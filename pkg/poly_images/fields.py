"""
Exact scalar arithmetic over the rationals, cyclotomic fields Q(zeta_n) and finite fields GF(p^k)

Elements are immutable; every element carries the descriptor of its field and arithmetic between elements of different
fields raises DescriptorMismatch.
"""
import enum
import functools
import itertools
import logging
import math
import random
import dataclasses
from fractions import Fraction
from typing import Any, Iterator, Optional, Union
from collections.abc import Sequence

import sympy

from poly_images.errors import DescriptorMismatch, DivisionByZero, InvalidInput

log = logging.getLogger(__name__)

DEFAULT_BOX = 10

_X = sympy.Symbol("x")

Scalar = Union[int, Fraction, "FieldElement"]


class FieldKind(str, enum.Enum):
    RATIONALS = "Q"
    CYCLOTOMIC = "cyclotomic"
    FINITE = "gf"


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """
    Integer coefficients of the n-th cyclotomic polynomial, lowest degree first
    """
    if n < 1:
        raise InvalidInput(f"cyclotomic order must be positive, got {n}")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(n, _X), _X).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _poly_mulmod(a: Sequence[Any], b: Sequence[Any], modulus: Sequence[int]) -> list[Any]:
    # modulus is monic, lowest degree first
    degree = len(modulus) - 1
    product = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                product[i + j] += ai * bj
    for top in range(len(product) - 1, degree - 1, -1):
        c = product[top]
        if not c:
            continue
        shift = top - degree
        for t, mt in enumerate(modulus):
            product[shift + t] -= c * mt
    product = product[:degree]
    product.extend([0] * (degree - len(product)))
    return product


def _to_fraction(value: Any) -> Fraction:
    # sympy Rational/Integer expose p and q
    return Fraction(int(value.p), int(value.q))


def _is_irreducible_mod_p(modulus: Sequence[int], p: int) -> bool:
    return bool(sympy.Poly(list(reversed(modulus)), _X, modulus=p).is_irreducible)


@functools.lru_cache(maxsize=None)
def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    for lower in itertools.product(range(p), repeat=k):
        candidate = lower + (1,)
        if candidate[0] == 0:
            continue
        if _is_irreducible_mod_p(candidate, p):
            return candidate
    raise InvalidInput(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclasses.dataclass(frozen=True)
class FieldDescriptor:
    """
    One of Q, Q(zeta_n) (elements are residues modulo the n-th cyclotomic polynomial), or GF(p^k) with a monic irreducible
    modulus stored lowest degree first.
    """

    kind: FieldKind
    n: int = 1
    p: int = 0
    k: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind == FieldKind.CYCLOTOMIC:
            if self.n < 1:
                raise InvalidInput(f"cyclotomic order must be positive, got {self.n}")
        elif self.kind == FieldKind.FINITE:
            if not sympy.isprime(self.p):
                raise InvalidInput(f"GF characteristic must be prime, got {self.p}")
            if self.k < 1:
                raise InvalidInput(f"extension degree must be positive, got {self.k}")
            if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
                raise InvalidInput(f"modulus {list(self.modulus)} is not monic of degree {self.k}")
            if any(not 0 <= c < self.p for c in self.modulus):
                raise InvalidInput(f"modulus {list(self.modulus)} has coefficients outside 0..{self.p - 1}")
            if self.k > 1 and not _is_irreducible_mod_p(self.modulus, self.p):
                raise InvalidInput(f"modulus {list(self.modulus)} is reducible over GF({self.p})")

    @classmethod
    def rationals(cls) -> "FieldDescriptor":
        return cls(kind=FieldKind.RATIONALS)

    @classmethod
    def cyclotomic(cls, n: int) -> "FieldDescriptor":
        return cls(kind=FieldKind.CYCLOTOMIC, n=n)

    @classmethod
    def finite(cls, p: int, k: int = 1, modulus: Optional[Sequence[int]] = None) -> "FieldDescriptor":
        if k == 1 and modulus is None:
            modulus = (0, 1)
        elif modulus is None:
            if not sympy.isprime(p):
                raise InvalidInput(f"GF characteristic must be prime, got {p}")
            modulus = _first_irreducible(p, k)
        return cls(kind=FieldKind.FINITE, p=p, k=k, modulus=tuple(int(c) for c in modulus))

    @classmethod
    def from_order(cls, q: int) -> "FieldDescriptor":
        factors = sympy.factorint(q) if q > 1 else {}
        if len(factors) != 1:
            raise InvalidInput(f"{q} is not a prime power")
        [(p, k)] = factors.items()
        return cls.finite(int(p), int(k))

    @classmethod
    def parse(cls, text: str) -> "FieldDescriptor":
        """
        Parse the CLI spelling of a field: Q, cyclotomic:N, gf:P or gf:P^K
        """
        spec = text.strip()
        try:
            if spec.upper() in ("Q", "QQ"):
                return cls.rationals()
            kind, _, arg = spec.partition(":")
            kind = kind.lower()
            if kind == "cyclotomic":
                return cls.cyclotomic(int(arg))
            if kind == "gf":
                p, _, k = arg.partition("^")
                return cls.finite(int(p), int(k) if k else 1)
        except ValueError as e:
            raise InvalidInput(f"cannot parse field {text!r}: {e}", location="--field") from e
        except InvalidInput as e:
            raise InvalidInput(e.message, location="--field") from e
        raise InvalidInput(f"unknown field {text!r}", location="--field")

    def to_primitive(self) -> dict[str, Any]:
        if self.kind == FieldKind.RATIONALS:
            return {"type": "Q"}
        if self.kind == FieldKind.CYCLOTOMIC:
            return {"type": "cyclotomic", "n": self.n}
        return {"type": "gf", "p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_primitive(cls, primitive: Any, location: str = "field") -> "FieldDescriptor":
        if isinstance(primitive, str):
            return cls.parse(primitive)
        if not isinstance(primitive, dict) or "type" not in primitive:
            raise InvalidInput("field must be an object with a type", location=location)
        kind = primitive["type"]
        try:
            if kind == "Q":
                return cls.rationals()
            if kind == "cyclotomic":
                return cls.cyclotomic(int(primitive["n"]))
            if kind == "gf":
                return cls.finite(int(primitive["p"]), int(primitive.get("k", 1)), primitive.get("modulus"))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"malformed field {primitive!r}: {e}", location=location) from e
        raise InvalidInput(f"unknown field type {kind!r}", location=location)

    def __str__(self):
        if self.kind == FieldKind.RATIONALS:
            return "Q"
        if self.kind == FieldKind.CYCLOTOMIC:
            return f"cyclotomic:{self.n}"
        return f"gf:{self.p}" if self.k == 1 else f"gf:{self.p}^{self.k}"

    def characteristic(self) -> int:
        return self.p if self.kind == FieldKind.FINITE else 0

    @property
    def is_finite(self) -> bool:
        return self.kind == FieldKind.FINITE

    def order(self) -> Optional[int]:
        return self.p**self.k if self.is_finite else None

    @functools.cached_property
    def phi(self) -> tuple[int, ...]:
        return cyclotomic_polynomial(self.n)

    @property
    def degree(self) -> int:
        """
        Dimension over the prime field, i.e. the length of a coordinate vector
        """
        if self.kind == FieldKind.RATIONALS:
            return 1
        if self.kind == FieldKind.CYCLOTOMIC:
            return len(self.phi) - 1
        return self.k

    # construction

    def _wrap(self, value: Any) -> "FieldElement":
        return FieldElement(self, value)

    def zero(self) -> "FieldElement":
        return self.from_int(0)

    def one(self) -> "FieldElement":
        return self.from_int(1)

    def from_int(self, value: int) -> "FieldElement":
        return self.from_fraction(Fraction(value))

    def from_fraction(self, value: Fraction) -> "FieldElement":
        if self.kind == FieldKind.RATIONALS:
            return self._wrap(value)
        if self.kind == FieldKind.CYCLOTOMIC:
            return self._wrap((value,) + (Fraction(0),) * (self.degree - 1))
        if value.denominator % self.p == 0:
            raise DivisionByZero(f"{value} has no image in GF({self.p})")
        residue = value.numerator * pow(value.denominator, -1, self.p) % self.p
        return self._wrap((residue,) + (0,) * (self.k - 1))

    def from_coefficients(self, coeffs: Sequence[Any]) -> "FieldElement":
        if self.kind == FieldKind.RATIONALS:
            [value] = coeffs
            return self._wrap(Fraction(value))
        if len(coeffs) != self.degree:
            raise InvalidInput(f"{self} elements have {self.degree} coordinates, got {len(coeffs)}")
        if self.kind == FieldKind.CYCLOTOMIC:
            return self._wrap(tuple(Fraction(c) for c in coeffs))
        return self._wrap(tuple(int(c) % self.p for c in coeffs))

    def coerce(self, value: Scalar) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise DescriptorMismatch(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def generator(self) -> "FieldElement":
        """
        zeta for Q(zeta_n), the class of x for GF(p^k) with k > 1
        """
        if self.kind == FieldKind.CYCLOTOMIC:
            if self.degree == 1:
                # Q(zeta_1) = Q(zeta_2) = Q, zeta is the root of phi
                return self.from_int(-self.phi[0])
            return self.from_coefficients([0, 1] + [0] * (self.degree - 2))
        if self.kind == FieldKind.FINITE and self.k > 1:
            return self.from_coefficients([0, 1] + [0] * (self.k - 2))
        raise InvalidInput(f"{self} has no distinguished generator")

    # finite field enumeration

    def element_index(self, element: "FieldElement") -> int:
        if not self.is_finite:
            raise InvalidInput(f"{self} is infinite")
        return sum(c * self.p**i for i, c in enumerate(element.value))

    def from_index(self, index: int) -> "FieldElement":
        coeffs = []
        for _ in range(self.k):
            index, c = divmod(index, self.p)
            coeffs.append(c)
        return self._wrap(tuple(coeffs))

    def elements(self) -> Iterator["FieldElement"]:
        order = self.order()
        if order is None:
            raise InvalidInput(f"{self} is infinite")
        return (self.from_index(i) for i in range(order))

    # element parsing

    def parse_element(self, primitive: Any, location: Optional[str] = None) -> "FieldElement":
        try:
            if isinstance(primitive, bool):
                raise TypeError("booleans are not field elements")
            if isinstance(primitive, int):
                return self.from_int(primitive)
            if isinstance(primitive, str):
                return self.from_fraction(Fraction(primitive.strip()))
            if isinstance(primitive, list):
                if self.kind == FieldKind.FINITE:
                    return self.from_coefficients([int(c) for c in primitive])
                return self.from_coefficients([Fraction(c) if isinstance(c, (int, str)) else c for c in primitive])
        except (TypeError, ValueError) as e:
            raise InvalidInput(f"cannot parse {primitive!r} as an element of {self}: {e}", location=location) from e
        raise InvalidInput(f"cannot parse {primitive!r} as an element of {self}", location=location)

    # payload arithmetic

    def _add(self, a: Any, b: Any) -> Any:
        if self.kind == FieldKind.RATIONALS:
            return a + b
        if self.kind == FieldKind.CYCLOTOMIC:
            return tuple(x + y for x, y in zip(a, b))
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def _neg(self, a: Any) -> Any:
        if self.kind == FieldKind.RATIONALS:
            return -a
        if self.kind == FieldKind.CYCLOTOMIC:
            return tuple(-x for x in a)
        return tuple(-x % self.p for x in a)

    def _mul(self, a: Any, b: Any) -> Any:
        if self.kind == FieldKind.RATIONALS:
            return a * b
        if self.kind == FieldKind.CYCLOTOMIC:
            return tuple(Fraction(c) for c in _poly_mulmod(a, b, self.phi))
        if self.k == 1:
            return (a[0] * b[0] % self.p,)
        return tuple(c % self.p for c in _poly_mulmod(a, b, self.modulus))

    def _is_zero(self, a: Any) -> bool:
        if self.kind == FieldKind.RATIONALS:
            return a == 0
        return not any(a)

    def _inverse(self, a: Any) -> Any:
        if self._is_zero(a):
            raise DivisionByZero(f"division by zero in {self}")
        if self.kind == FieldKind.RATIONALS:
            return 1 / a
        if self.kind == FieldKind.CYCLOTOMIC:
            if self.degree == 1:
                return (1 / a[0],)
            numerator = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(a)], _X, domain=sympy.QQ)
            inverse = numerator.invert(sympy.Poly(list(reversed(self.phi)), _X, domain=sympy.QQ))
            coeffs = [_to_fraction(c) for c in reversed(inverse.all_coeffs())]
            return tuple(coeffs + [Fraction(0)] * (self.degree - len(coeffs)))
        if self.k == 1:
            return (pow(a[0], -1, self.p),)
        # a^(q-2) in the multiplicative group of order q-1
        result: Any = (1,) + (0,) * (self.k - 1)
        base, exponent = a, self.p**self.k - 2
        while exponent:
            if exponent & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            exponent >>= 1
        return result


RATIONALS = FieldDescriptor.rationals()


class FieldElement:
    __slots__ = ("field", "value")

    field: FieldDescriptor
    value: Any

    def __init__(self, field: FieldDescriptor, value: Any):
        self.field = field
        self.value = value

    def _other(self, other: Scalar) -> Any:
        return self.field.coerce(other).value

    def __add__(self, other: Scalar) -> "FieldElement":
        return FieldElement(self.field, self.field._add(self.value, self._other(other)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field._neg(self.value))

    def __sub__(self, other: Scalar) -> "FieldElement":
        return FieldElement(self.field, self.field._add(self.value, self.field._neg(self._other(other))))

    def __rsub__(self, other: Scalar) -> "FieldElement":
        return FieldElement(self.field, self.field._add(self._other(other), self.field._neg(self.value)))

    def __mul__(self, other: Scalar) -> "FieldElement":
        return FieldElement(self.field, self.field._mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field._inverse(self.value))

    def __truediv__(self, other: Scalar) -> "FieldElement":
        return FieldElement(self.field, self.field._mul(self.value, self.field._inverse(self._other(other))))

    def __rtruediv__(self, other: Scalar) -> "FieldElement":
        return FieldElement(self.field, self.field._mul(self._other(other), self.field._inverse(self.value)))

    def __pow__(self, exponent: int) -> "FieldElement":
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = self.field.one()
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self) -> bool:
        return self.field._is_zero(self.value)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                return self.value == self.field.coerce(other).value
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def to_primitive(self) -> Any:
        if self.field.kind == FieldKind.RATIONALS:
            return str(self.value)
        if self.field.kind == FieldKind.CYCLOTOMIC:
            return [str(c) for c in self.value]
        if self.field.k == 1:
            return str(self.value[0])
        return list(self.value)

    def __repr__(self):
        return f"FieldElement({self.field}, {self.to_primitive()!r})"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise DescriptorMismatch(f"cannot combine elements of {a.field} and {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def _primitive_root(field: FieldDescriptor) -> FieldElement:
    order = field.order()
    assert order is not None
    group_order = order - 1
    prime_factors = list(sympy.factorint(group_order)) if group_order > 1 else []
    for index in range(1, order):
        candidate = field.from_index(index)
        if all(candidate ** (group_order // r) != 1 for r in prime_factors):
            return candidate
    raise AssertionError(f"{field} has no primitive root")


def nth_roots_of_unity(field: FieldDescriptor, n: int) -> list[FieldElement]:
    """
    All solutions of x^n = 1 in the field, 1 first

    For finite fields the roots are listed in element index order.
    """
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    if field.kind == FieldKind.RATIONALS:
        roots = [field.one()]
        if n % 2 == 0:
            roots.append(-field.one())
        return roots
    if field.kind == FieldKind.CYCLOTOMIC:
        # the roots of unity of Q(zeta_m) form a cyclic group of order lcm(2, m)
        group_order = field.n if field.n % 2 == 0 else 2 * field.n
        primitive = field.generator() if field.n % 2 == 0 else -field.generator()
        count = math.gcd(n, group_order)
        step = primitive ** (group_order // count)
        roots = [field.one()]
        for _ in range(count - 1):
            roots.append(roots[-1] * step)
        return roots
    order = field.order()
    assert order is not None
    count = math.gcd(n, order - 1)
    if count == 1:
        return [field.one()]
    step = _primitive_root(field) ** ((order - 1) // count)
    roots = [field.one()]
    for _ in range(count - 1):
        roots.append(roots[-1] * step)
    return sorted(roots, key=field.element_index)


def sample_element(field: FieldDescriptor, rng: random.Random, box: int = DEFAULT_BOX) -> FieldElement:
    """
    A possibly zero element: integer coordinates in [-box, box], or uniform over a finite field
    """
    if field.is_finite:
        order = field.order()
        assert order is not None
        return field.from_index(rng.randrange(order))
    if field.kind == FieldKind.RATIONALS:
        return field.from_int(rng.randint(-box, box))
    return field.from_coefficients([rng.randint(-box, box) for _ in range(field.degree)])


def sample_nonzero(field: FieldDescriptor, rng: random.Random, box: int = DEFAULT_BOX) -> FieldElement:
    if field.is_finite:
        order = field.order()
        assert order is not None
        return field.from_index(rng.randrange(1, order))
    while True:
        element = sample_element(field, rng, box)
        if not element.is_zero():
            return element


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
