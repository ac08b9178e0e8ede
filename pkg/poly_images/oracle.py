"""
Brute-force images over small finite fields

Field elements are table indexes (index = sum c_i p^i) and matrices are packed into integers, row-major base-q digits
with the first entry most significant, so an image is a flat boolean array over all q^(n^2) matrices.
"""
import enum
import random
import logging
import functools
import dataclasses
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Optional
from collections.abc import Iterable, Sequence

import numpy as np
from more_itertools import divide

from poly_images.budgets import Budgets
from poly_images.classifier import ImageClassification, Verdict
from poly_images.errors import DescriptorMismatch, InvalidInput, ModeMismatch, TooLarge
from poly_images.fields import DEFAULT_BOX, FieldDescriptor
from poly_images.matrices import Matrix, random_invertible_matrix
from poly_images.polynomials import MONOMIALS, MultilinearCubic

log = logging.getLogger(__name__)

CAVEAT = "finite fields lie outside the hypotheses of the surjectivity criteria; this comparison is evidence, not proof"


class EnumerationMode(str, enum.Enum):
    EXHAUSTIVE = "Exhaustive"
    SAMPLED = "Sampled"


@dataclasses.dataclass(frozen=True, eq=False)
class FieldTables:
    q: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    # inv[0] is a placeholder
    inv: np.ndarray


@functools.lru_cache(maxsize=None)
def field_tables(field: FieldDescriptor) -> FieldTables:
    order = field.order()
    if order is None:
        raise InvalidInput(f"{field} is infinite")
    elements = list(field.elements())
    add = np.array([[field.element_index(a + b) for b in elements] for a in elements], dtype=np.int64)
    mul = np.array([[field.element_index(a * b) for b in elements] for a in elements], dtype=np.int64)
    neg = np.array([field.element_index(-a) for a in elements], dtype=np.int64)
    inv = np.array([0] + [field.element_index(a.inverse()) for a in elements[1:]], dtype=np.int64)
    return FieldTables(q=order, add=add, mul=mul, neg=neg, inv=inv)


def _weights(n: int, q: int) -> np.ndarray:
    return q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)


def encode(matrices: np.ndarray, q: int) -> np.ndarray:
    n = matrices.shape[-1]
    flat = matrices.reshape(matrices.shape[:-2] + (n * n,))
    return flat @ _weights(n, q)


def decode(codes: Any, n: int, q: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    digits = (codes[..., None] // _weights(n, q)) % q
    return digits.reshape(codes.shape + (n, n))


def matrix_code(M: Matrix) -> int:
    field = M.field
    order = field.order()
    assert order is not None
    code = 0
    for e in M.vec():
        code = code * order + field.element_index(e)
    return code


def _matmul(A: np.ndarray, B: np.ndarray, tables: FieldTables) -> np.ndarray:
    products = tables.mul[A[..., :, :, None], B[..., None, :, :]]
    acc = products[..., :, 0, :]
    for k in range(1, products.shape[-2]):
        acc = tables.add[acc, products[..., :, k, :]]
    return acc


def _evaluate(coefficients: Sequence[int], arguments: dict[str, np.ndarray], tables: FieldTables) -> np.ndarray:
    shape = np.broadcast_shapes(*(a.shape for a in arguments.values()))
    acc = np.zeros(shape, dtype=np.int64)
    pairs: dict[str, np.ndarray] = {}
    for word, c in zip(MONOMIALS, coefficients):
        if c == 0:
            continue
        prefix = word[:2]
        if prefix not in pairs:
            pairs[prefix] = _matmul(arguments[prefix[0]], arguments[prefix[1]], tables)
        term = tables.mul[c, _matmul(pairs[prefix], arguments[word[2]], tables)]
        acc = tables.add[acc, term]
    return acc


def _traces(matrices: np.ndarray, tables: FieldTables) -> np.ndarray:
    acc = matrices[..., 0, 0]
    for i in range(1, matrices.shape[-1]):
        acc = tables.add[acc, matrices[..., i, i]]
    return acc


def _enumerate_chunk(task: tuple[FieldDescriptor, tuple[int, ...], int, list[int], int]) -> np.ndarray:
    field, coefficients, n, x_codes, batch = task
    tables = field_tables(field)
    q = tables.q
    count = q ** (n * n)
    members = np.zeros(count, dtype=bool)
    everything = decode(np.arange(count), n, q)
    pairs = count * count
    for x_code in x_codes:
        X = everything[x_code]
        for start in range(0, pairs, batch):
            index = np.arange(start, min(start + batch, pairs))
            values = _evaluate(coefficients, {"x": X, "y": everything[index // count], "z": everything[index % count]}, tables)
            members[encode(values, q)] = True
    return members


@dataclasses.dataclass(frozen=True, eq=False)
class ImageSet:
    field: FieldDescriptor
    n: int
    members: np.ndarray
    mode: EnumerationMode = EnumerationMode.EXHAUSTIVE
    samples: Optional[int] = None

    @property
    def q(self) -> int:
        order = self.field.order()
        assert order is not None
        return order

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.members))

    def codes(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def arrays(self) -> np.ndarray:
        return decode(self.codes(), self.n, self.q)

    def matrices(self) -> list[Matrix]:
        return [Matrix(self.field, [[self.field.from_index(int(e)) for e in row] for row in m]) for m in self.arrays()]

    def contains(self, M: Matrix) -> bool:
        return bool(self.members[matrix_code(M)])

    def is_subset_of(self, other: "ImageSet") -> bool:
        return bool(np.all(other.members[self.members]))

    @classmethod
    def from_matrices(cls, field: FieldDescriptor, n: int, matrices: Iterable[Matrix]) -> "ImageSet":
        order = field.order()
        if order is None:
            raise InvalidInput(f"{field} is infinite")
        members = np.zeros(order ** (n * n), dtype=bool)
        for M in matrices:
            if M.field != field or M.rows != n or M.cols != n:
                raise DescriptorMismatch(f"expected {n}x{n} matrices over {field}")
            members[matrix_code(M)] = True
        return cls(field=field, n=n, members=members)

    def to_primitive(self) -> dict[str, Any]:
        result: dict[str, Any] = {"n": self.n, "q": self.q, "size": self.size, "mode": self.mode.value}
        if self.samples is not None:
            result["samples"] = self.samples
        return result


def enumerate_image(
    f: MultilinearCubic,
    n: int,
    q: Optional[int] = None,
    mode: EnumerationMode = EnumerationMode.EXHAUSTIVE,
    samples: Optional[int] = None,
    seed: int = 0,
    budgets: Optional[Budgets] = None,
) -> ImageSet:
    budgets = Budgets() if budgets is None else budgets
    field = f.field
    order = field.order()
    if order is None:
        raise InvalidInput(f"enumeration needs a finite field, got {field}", location="--field")
    if q is not None and q != order:
        raise DescriptorMismatch(f"polynomial over {field} enumerated with q = {q}")
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}", location="--n")
    count = order ** (n * n)
    if count > budgets.oracle_max_matrices:
        raise TooLarge(f"{count} matrices exceed the limit of {budgets.oracle_max_matrices}")
    coefficients = tuple(field.element_index(c) for c in f.coefficients)

    if mode == EnumerationMode.EXHAUSTIVE:
        if count**3 > budgets.oracle_max_triples:
            raise TooLarge(f"{count ** 3} triples exceed the limit of {budgets.oracle_max_triples}")
        tasks = [(field, coefficients, n, list(chunk), budgets.oracle_sample_batch) for chunk in divide(budgets.oracle_workers, range(count))]
        log.info("enumerating %d triples in %d chunks", count**3, len(tasks))
        if budgets.oracle_workers == 1:
            results = [_enumerate_chunk(task) for task in tasks]
        else:
            with ProcessPoolExecutor(max_workers=budgets.oracle_workers) as pool:
                results = list(pool.map(_enumerate_chunk, tasks))
        return ImageSet(field=field, n=n, members=np.logical_or.reduce(results))

    if samples is None or samples < 1:
        raise InvalidInput("sampled enumeration needs a positive sample count", location="--samples")
    tables = field_tables(field)
    members = np.zeros(count, dtype=bool)
    batch = budgets.oracle_sample_batch
    for b, start in enumerate(range(0, samples, batch)):
        size = min(batch, samples - start)
        generator = np.random.default_rng([seed % 2**64, b])
        # full batches are drawn and truncated so that a larger count extends a smaller one
        X = generator.integers(0, order, size=(batch, n, n))[:size]
        Y = generator.integers(0, order, size=(batch, n, n))[:size]
        Z = generator.integers(0, order, size=(batch, n, n))[:size]
        members[encode(_evaluate(coefficients, {"x": X, "y": Y, "z": Z}, tables), order)] = True
    return ImageSet(field=field, n=n, members=members, mode=EnumerationMode.SAMPLED, samples=samples)


def _require_exhaustive(S: ImageSet, operation: str):
    if S.mode != EnumerationMode.EXHAUSTIVE:
        raise ModeMismatch(f"{operation} needs an exhaustive image, got a sampled one")


def is_linear_subspace(S: ImageSet) -> bool:
    """
    Closed under addition and scaling; for a finite set containing 0 that means |S| = q^(dim span S)
    """
    _require_exhaustive(S, "is_linear_subspace")
    size, q = S.size, S.q
    if size == 0 or not S.members[0]:
        return False
    tables = field_tables(S.field)
    # echelon rows; each has zeros at the pivots of the rows before it
    basis: list[tuple[int, np.ndarray]] = []
    for code in S.codes():
        v = decode(code, S.n, q).reshape(-1)
        for pivot, row in basis:
            if v[pivot]:
                v = tables.add[v, tables.neg[tables.mul[v[pivot], row]]]
        nonzero = np.flatnonzero(v)
        if nonzero.size:
            pivot = int(nonzero[0])
            basis.append((pivot, tables.mul[tables.inv[v[pivot]], v]))
            if q ** len(basis) > size:
                return False
    return q ** len(basis) == size


def is_scalar_closed(S: ImageSet) -> bool:
    tables = field_tables(S.field)
    arrays = S.arrays()
    for c in range(1, S.q):
        if not np.all(S.members[encode(tables.mul[c, arrays], S.q)]):
            return False
    return True


def _conjugators(field: FieldDescriptor, n: int, samples: Optional[int], rng: Optional[random.Random], box: int) -> Iterable[Matrix]:
    if samples is None:
        order = field.order()
        assert order is not None
        for code in range(order ** (n * n)):
            P = Matrix(field, [[field.from_index(int(e)) for e in row] for row in decode(code, n, order)])
            if P.is_invertible():
                yield P
        return
    rng = random.Random(0) if rng is None else rng
    for _ in range(samples):
        yield random_invertible_matrix(field, n, rng, box)


def _to_array(M: Matrix) -> np.ndarray:
    return np.array([[M.field.element_index(e) for e in row] for row in M.entries], dtype=np.int64)


def is_conjugation_closed(S: ImageSet, samples: Optional[int] = None, rng: Optional[random.Random] = None, box: int = DEFAULT_BOX) -> bool:
    """
    P S P^-1 within S for every P in GL_n(F_q), or for `samples` random invertible P
    """
    tables = field_tables(S.field)
    arrays = S.arrays()
    for P in _conjugators(S.field, S.n, samples, rng, box):
        conjugated = _matmul(_matmul(_to_array(P), arrays, tables), _to_array(P.inverse()), tables)
        if not np.all(S.members[encode(conjugated, S.q)]):
            return False
    return True


def trace_zero_count(n: int, q: int) -> int:
    return q ** (n * n - 1)


def expected_shape(f: MultilinearCubic) -> Verdict:
    """
    The image shape the coefficient sums point to: {0}, sl_n or M_n
    """
    if f.is_zero():
        return Verdict.ZERO
    lambda_sum, mu_sum = f.coefficient_sums()
    if lambda_sum.is_zero() and mu_sum.is_zero():
        return Verdict.TRACELESS
    return Verdict.FULL


def cross_check(S: ImageSet, classification: ImageClassification, f: Optional[MultilinearCubic] = None) -> dict[str, Any]:
    _require_exhaustive(S, "cross_check")
    n, q = S.n, S.q
    report: dict[str, Any] = {
        "verdict": classification.verdict.value,
        "regime": classification.regime.value,
        "size": S.size,
        "caveat": CAVEAT,
    }
    predicted, source = classification.verdict, "classification"
    if predicted == Verdict.UNDETERMINED and f is not None:
        predicted, source = expected_shape(f), "coefficient sums"
    if predicted == Verdict.UNDETERMINED:
        report["comparison"] = None
        return report

    tables = field_tables(S.field)
    if predicted == Verdict.ZERO:
        predicted_size, contained = 1, S.size == 0 or (S.size == 1 and bool(S.members[0]))
    elif predicted == Verdict.TRACELESS:
        predicted_size, contained = trace_zero_count(n, q), bool(np.all(_traces(S.arrays(), tables) == 0))
    else:
        predicted_size, contained = q ** (n * n), True
    report["comparison"] = {
        "predicted": predicted.value,
        "source": source,
        "predicted_size": predicted_size,
        "contained": contained,
        "equal": contained and S.size == predicted_size,
    }
    if not report["comparison"]["equal"]:
        log.warning("enumerated image of size %d differs from the predicted %s set of size %d", S.size, predicted.value, predicted_size)
    return report


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
