"""
Dense exact matrices over a field descriptor

Elimination is plain Gauss-Jordan with division; pivots are taken from the leftmost usable column and the first usable row
below the current one, so every result is deterministic.
"""
import logging
import random
from typing import Any, Optional
from collections.abc import Iterable, Sequence

from poly_images.errors import DescriptorMismatch, DimensionMismatch, DivisionByZero, Exhausted, Inconsistent, InvalidInput, NotSquare, VerificationFailed
from poly_images.fields import DEFAULT_BOX, FieldDescriptor, FieldElement, Scalar, sample_element

log = logging.getLogger(__name__)

Vector = tuple[FieldElement, ...]


def _rref(rows: list[list[FieldElement]], limit: Optional[int] = None) -> tuple[list[list[FieldElement]], list[int]]:
    """
    Reduced row echelon form of `rows` (modified in place); only the first `limit` columns are used as pivots
    """
    if not rows:
        return rows, []
    cols = len(rows[0]) if limit is None else limit
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inverse = rows[r][c].inverse()
        rows[r] = [entry * inverse for entry in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


class Matrix:
    __slots__ = ("field", "rows", "cols", "entries")

    field: FieldDescriptor
    rows: int
    cols: int
    entries: tuple[Vector, ...]

    def __init__(self, field: FieldDescriptor, entries: Iterable[Iterable[Scalar]]):
        self.field = field
        self.entries = tuple(tuple(field.coerce(e) for e in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatch("ragged matrix rows")

    # constructors

    @classmethod
    def zeros(cls, field: FieldDescriptor, rows: int, cols: Optional[int] = None) -> "Matrix":
        zero = field.zero()
        return cls(field, [[zero] * (rows if cols is None else cols) for _ in range(rows)])

    @classmethod
    def identity(cls, field: FieldDescriptor, n: int) -> "Matrix":
        return cls.diag(field, [field.one()] * n)

    @classmethod
    def diag(cls, field: FieldDescriptor, values: Sequence[Scalar]) -> "Matrix":
        zero = field.zero()
        n = len(values)
        return cls(field, [[values[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, field: FieldDescriptor, n: int, i: int, j: int) -> "Matrix":
        """
        The matrix unit e_ij, indices taken mod n
        """
        return cls.from_function(field, n, n, lambda r, c: 1 if (r, c) == (i % n, j % n) else 0)

    @classmethod
    def from_function(cls, field: FieldDescriptor, rows: int, cols: int, fn) -> "Matrix":
        return cls(field, [[fn(i, j) for j in range(cols)] for i in range(rows)])

    @classmethod
    def cyclic(cls, field: FieldDescriptor, n: int, power: int = 1) -> "Matrix":
        """
        sum_i e_{i, i+power}, indices mod n
        """
        return cls.from_function(field, n, n, lambda i, j: 1 if j == (i + power) % n else 0)

    @classmethod
    def shift(cls, field: FieldDescriptor, n: int) -> "Matrix":
        """
        The matrix of s, where s(e_i) = e_{i+1} and indices are mod n
        """
        return cls.from_function(field, n, n, lambda i, j: 1 if i == (j + 1) % n else 0)

    @classmethod
    def weighted_cyclic(cls, field: FieldDescriptor, weights: Sequence[Scalar], power: int) -> "Matrix":
        """
        diag(weights) times the cyclic matrix with ones on the power-th cyclic superdiagonal
        """
        n = len(weights)
        return cls.from_function(field, n, n, lambda i, j: weights[i] if j == (i + power) % n else 0)

    @classmethod
    def permutation(cls, field: FieldDescriptor, perm: Sequence[int]) -> "Matrix":
        """
        The matrix sending e_j to e_perm[j]
        """
        n = len(perm)
        return cls.from_function(field, n, n, lambda i, j: 1 if perm[j] == i else 0)

    @classmethod
    def from_columns(cls, field: FieldDescriptor, columns: Sequence[Sequence[Scalar]]) -> "Matrix":
        return cls(field, zip(*columns)) if columns else cls(field, [])

    # access

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def n(self) -> int:
        if not self.is_square:
            raise NotSquare(f"{self.rows}x{self.cols} matrix is not square")
        return self.rows

    def __getitem__(self, index: tuple[int, int]) -> FieldElement:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.field, self.entries))

    def __repr__(self):
        return f"Matrix({self.field}, {[[e.to_primitive() for e in row] for row in self.entries]})"

    # arithmetic

    def _check_compatible(self, other: "Matrix"):
        if self.field != other.field:
            raise DescriptorMismatch(f"cannot combine matrices over {self.field} and {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"cannot add {self.rows}x{self.cols} and {other.rows}x{other.cols}")
        return Matrix(self.field, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [[-a for a in row] for row in self.entries])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c: Scalar) -> "Matrix":
        c = self.field.coerce(c)
        return Matrix(self.field, [[c * a for a in row] for row in self.entries])

    def __rmul__(self, c: Scalar) -> "Matrix":
        return self.scale(c)

    def __mul__(self, c: Scalar) -> "Matrix":
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = self.field.zero()
        other_columns = other.columns()
        result = []
        for row in self.entries:
            out_row = []
            for column in other_columns:
                acc = zero
                for a, b in zip(row, column):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out_row.append(acc)
            result.append(out_row)
        return Matrix(self.field, result)

    def apply(self, vec: Sequence[FieldElement]) -> Vector:
        if len(vec) != self.cols:
            raise DimensionMismatch(f"cannot apply {self.rows}x{self.cols} matrix to a vector of length {len(vec)}")
        zero = self.field.zero()
        out = []
        for row in self.entries:
            acc = zero
            for a, b in zip(row, vec):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.columns())

    def trace(self) -> FieldElement:
        acc = self.field.zero()
        for i in range(self.n):
            acc = acc + self.entries[i][i]
        return acc

    def conjugate(self, P: "Matrix", P_inverse: Optional["Matrix"] = None) -> "Matrix":
        """
        P M P^-1
        """
        return P @ self @ (P.inverse() if P_inverse is None else P_inverse)

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def vec(self) -> Vector:
        """
        Row-major flattening: entry (i, j) lands at i * cols + j
        """
        return tuple(e for row in self.entries for e in row)

    @classmethod
    def unvec(cls, field: FieldDescriptor, vec: Sequence[FieldElement], rows: int, cols: Optional[int] = None) -> "Matrix":
        cols = rows if cols is None else cols
        if len(vec) != rows * cols:
            raise DimensionMismatch(f"vector of length {len(vec)} cannot be a {rows}x{cols} matrix")
        return cls(field, [vec[i * cols : (i + 1) * cols] for i in range(rows)])

    # elimination

    def _rows_copy(self) -> list[list[FieldElement]]:
        return [list(row) for row in self.entries]

    def rref(self) -> tuple["Matrix", list[int]]:
        rows, pivots = _rref(self._rows_copy())
        return Matrix(self.field, rows), pivots

    def rank(self) -> int:
        return len(_rref(self._rows_copy())[1])

    def det(self) -> FieldElement:
        n = self.n
        rows = self._rows_copy()
        result = self.field.one()
        for c in range(n):
            pivot = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
            if pivot is None:
                return self.field.zero()
            if pivot != c:
                rows[c], rows[pivot] = rows[pivot], rows[c]
                result = -result
            pivot_value = rows[c][c]
            result = result * pivot_value
            inverse = pivot_value.inverse()
            for i in range(c + 1, n):
                if not rows[i][c].is_zero():
                    factor = rows[i][c] * inverse
                    rows[i] = [a - factor * b for a, b in zip(rows[i], rows[c])]
        return result

    def kernel_basis(self) -> list[Vector]:
        rows, pivots = _rref(self._rows_copy())
        zero, one = self.field.zero(), self.field.one()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [zero] * self.cols
            v[f] = one
            for r, p in enumerate(pivots):
                v[p] = -rows[r][f]
            basis.append(tuple(v))
        for v in basis:
            if any(not e.is_zero() for e in self.apply(v)):
                raise VerificationFailed("kernel vector does not annihilate the matrix")
        return basis

    def solve(self, rhs: Sequence[FieldElement]) -> Vector:
        """
        A particular solution of A x = rhs with free variables set to zero

        Raises Inconsistent when rhs is outside the column space.
        """
        if len(rhs) != self.rows:
            raise DimensionMismatch(f"right-hand side of length {len(rhs)} for a matrix with {self.rows} rows")
        rhs = [self.field.coerce(e) for e in rhs]
        augmented = [list(row) + [b] for row, b in zip(self.entries, rhs)]
        rows, pivots = _rref(augmented, limit=self.cols)
        for r in range(len(pivots), self.rows):
            if not rows[r][self.cols].is_zero():
                raise Inconsistent("right-hand side is not in the column space")
        solution = [self.field.zero()] * self.cols
        for r, p in enumerate(pivots):
            solution[p] = rows[r][self.cols]
        if list(self.apply(solution)) != rhs:
            raise VerificationFailed("solution does not reproduce the right-hand side")
        return tuple(solution)

    def inverse(self) -> "Matrix":
        n = self.n
        identity = Matrix.identity(self.field, n)
        augmented = [list(row) + list(irow) for row, irow in zip(self.entries, identity.entries)]
        rows, pivots = _rref(augmented, limit=n)
        if pivots != list(range(n)):
            raise DivisionByZero("matrix is singular")
        return Matrix(self.field, [row[n:] for row in rows])

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def charpoly(self) -> list[FieldElement]:
        """
        Characteristic polynomial det(xI - M), lowest degree first, through a Hessenberg similarity
        """
        n = self.n
        h = self._rows_copy()
        for m in range(n - 2):
            pivot = next((i for i in range(m + 1, n) if not h[i][m].is_zero()), None)
            if pivot is None:
                continue
            if pivot != m + 1:
                h[pivot], h[m + 1] = h[m + 1], h[pivot]
                for row in h:
                    row[pivot], row[m + 1] = row[m + 1], row[pivot]
            inverse = h[m + 1][m].inverse()
            for r in range(m + 2, n):
                if h[r][m].is_zero():
                    continue
                t = h[r][m] * inverse
                h[r] = [a - t * b for a, b in zip(h[r], h[m + 1])]
                for row in h:
                    row[m + 1] = row[m + 1] + t * row[r]

        zero, one = self.field.zero(), self.field.one()

        def _sub(p: list[FieldElement], q: list[FieldElement]) -> list[FieldElement]:
            size = max(len(p), len(q))
            p = p + [zero] * (size - len(p))
            q = q + [zero] * (size - len(q))
            return [a - b for a, b in zip(p, q)]

        polys: list[list[FieldElement]] = [[one]]
        for m in range(n):
            previous = polys[-1]
            # (x - h_mm) p_{m-1}
            current = _sub([zero] + previous, [h[m][m] * c for c in previous])
            product = one
            for i in range(m - 1, -1, -1):
                product = product * h[i + 1][i]
                if product.is_zero():
                    break
                coefficient = h[i][m] * product
                if not coefficient.is_zero():
                    current = _sub(current, [coefficient * c for c in polys[i]])
            polys.append(current)
        return polys[-1]

    # serialization

    def to_primitive(self) -> dict[str, Any]:
        return {
            "field": self.field.to_primitive(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[e.to_primitive() for e in row] for row in self.entries],
        }

    @classmethod
    def from_primitive(cls, primitive: Any, field: Optional[FieldDescriptor] = None, location: str = "matrix") -> "Matrix":
        if isinstance(primitive, list):
            primitive = {"entries": primitive}
        if not isinstance(primitive, dict) or "entries" not in primitive:
            raise InvalidInput("matrix must be an object with entries", location=location)
        if "field" in primitive:
            declared = FieldDescriptor.from_primitive(primitive["field"], location=f"{location}.field")
            if field is not None and declared != field:
                raise InvalidInput(f"matrix is over {declared}, expected {field}", location=f"{location}.field")
            field = declared
        if field is None:
            raise InvalidInput("matrix has no field", location=location)
        entries = primitive["entries"]
        if not isinstance(entries, list) or not all(isinstance(row, list) for row in entries):
            raise InvalidInput("entries must be a list of rows", location=f"{location}.entries")
        parsed = [[field.parse_element(e, location=f"{location}.entries[{i}][{j}]") for j, e in enumerate(row)] for i, row in enumerate(entries)]
        try:
            matrix = cls(field, parsed)
        except DimensionMismatch as e:
            raise InvalidInput(str(e), location=f"{location}.entries") from e
        for key in ("rows", "cols"):
            if key in primitive and primitive[key] != getattr(matrix, key):
                raise InvalidInput(f"declared {key}={primitive[key]} but entries give {getattr(matrix, key)}", location=f"{location}.{key}")
        return matrix


def det(M: Matrix) -> FieldElement:
    return M.det()


def solve(A: Matrix, rhs: Sequence[FieldElement]) -> Vector:
    return A.solve(rhs)


def kernel_basis(A: Matrix) -> list[Vector]:
    return A.kernel_basis()


def shift_apply(vec: Sequence[FieldElement], j: int) -> Vector:
    """
    Apply s^j, where s(e_i) = e_{i+1} with indices mod len(vec)
    """
    n = len(vec)
    if n == 0:
        return ()
    out: list[Optional[FieldElement]] = [None] * n
    for i, e in enumerate(vec):
        out[(i + j) % n] = e
    return tuple(out)  # type: ignore[arg-type]


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    if not blocks:
        raise DimensionMismatch("block_diag needs at least one block")
    field = blocks[0].field
    for block in blocks:
        if block.field != field:
            raise DescriptorMismatch(f"blocks over {field} and {block.field}")
        if not block.is_square:
            raise NotSquare(f"{block.rows}x{block.cols} block is not square")
    size = sum(block.rows for block in blocks)
    rows = [list(row) for row in Matrix.zeros(field, size).entries]
    offset = 0
    for block in blocks:
        for i in range(block.rows):
            for j in range(block.cols):
                rows[offset + i][offset + j] = block[i, j]
        offset += block.rows
    return Matrix(field, rows)


def kron(A: Matrix, B: Matrix) -> Matrix:
    if A.field != B.field:
        raise DescriptorMismatch(f"cannot combine matrices over {A.field} and {B.field}")
    return Matrix.from_function(A.field, A.rows * B.rows, A.cols * B.cols, lambda i, j: A[i // B.rows, j // B.cols] * B[i % B.rows, j % B.cols])


def random_matrix(field: FieldDescriptor, n: int, rng: random.Random, box: int = DEFAULT_BOX) -> Matrix:
    return Matrix.from_function(field, n, n, lambda i, j: sample_element(field, rng, box))


def random_invertible_matrix(field: FieldDescriptor, n: int, rng: random.Random, box: int = DEFAULT_BOX, max_tries: int = 64) -> Matrix:
    for _ in range(max_tries):
        M = random_matrix(field, n, rng, box)
        if M.is_invertible():
            return M
    raise Exhausted(f"no invertible {n}x{n} matrix over {field} within {max_tries} tries")


def frobenius_circulant_identity(u1: FieldElement, u2: FieldElement, n: int, p: int) -> FieldElement:
    """
    (u1^m + (-1)^(m-1) u2^m)^(p^k) for n = p^k * m with p not dividing m
    """
    m, prime_power = n, 1
    while m % p == 0:
        m //= p
        prime_power *= p
    sign = 1 if m % 2 == 1 else -1
    return (u1**m + sign * u2**m) ** prime_power


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
