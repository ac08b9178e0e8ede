"""
Image classification of multilinear cubics from their coefficients

The decision only uses the two coefficient sums, the characteristic of the ground field and the root-of-unity
condition; the per-rotation case report explains when the structured construction is blocked.
"""
import enum
import logging
import random
import dataclasses
from typing import Any, Optional

from more_itertools import first_true

from poly_images.errors import DescriptorMismatch, InvalidInput, PreconditionViolated
from poly_images.fields import DEFAULT_BOX, FieldDescriptor, FieldElement, nth_roots_of_unity
from poly_images.matrices import random_matrix
from poly_images.polynomials import MultilinearCubic
from poly_images.structured import check_root_condition, trivial_roots_regime

log = logging.getLogger(__name__)

# (a, b, c) = (rho(1), rho(2), rho(3)), zero-based
ROTATIONS: dict[str, tuple[int, int, int]] = {
    "id": (0, 1, 2),
    "(123)": (1, 2, 0),
    "(132)": (2, 0, 1),
}


class Verdict(str, enum.Enum):
    ZERO = "Zero"
    TRACELESS = "Traceless"
    FULL = "Full"
    UNDETERMINED = "Undetermined"


class Regime(str, enum.Enum):
    CHAR0_CLOSED = "Char0AlgClosed"
    ROOT_CONDITION = "RootConditionField"
    OUT_OF_HYPOTHESES = "OutOfHypotheses"


class RegimeHint(str, enum.Enum):
    # K is an algebraically closed extension of the ground field
    CLOSURE = "closure"
    # K is the ground field itself
    GROUND = "ground"


@dataclasses.dataclass(frozen=True)
class RotationCases:
    """
    Which of the four obstruction patterns hold for one rotation (a, b, c) of the variables

    root_twist: l_a + l_b + w l_c = 0 and m_a + m_b + w^-1 m_c = 0 for an n-th root of unity w (kept in `omega`)
    tail_vanishes: l_a + l_b + m_a + m_b = 0 and l_c = m_c = 0
    pairwise_cancel: l_a + l_b = 0, m_a + m_b = 0 and l_c + m_c = 0
    head_vanishes: l_a = m_a = 0, m_b + l_c = 0 and l_b + m_c = 0
    """

    root_twist: bool
    omega: Optional[FieldElement]
    tail_vanishes: bool
    pairwise_cancel: bool
    head_vanishes: bool

    @property
    def any(self) -> bool:
        return self.root_twist or self.tail_vanishes or self.pairwise_cancel or self.head_vanishes

    def to_primitive(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "root_twist": self.root_twist,
            "tail_vanishes": self.tail_vanishes,
            "pairwise_cancel": self.pairwise_cancel,
            "head_vanishes": self.head_vanishes,
        }
        if self.omega is not None:
            result["omega"] = self.omega.to_primitive()
        return result


@dataclasses.dataclass(frozen=True)
class CaseReport:
    rotations: dict[str, RotationCases]

    def blocked_everywhere(self) -> bool:
        return all(cases.any for cases in self.rotations.values())

    def free_rotations(self) -> list[str]:
        return [name for name, cases in self.rotations.items() if not cases.any]

    def to_primitive(self) -> dict[str, Any]:
        return {name: cases.to_primitive() for name, cases in self.rotations.items()}


def rotation_cases(f: MultilinearCubic, rotation: tuple[int, int, int], roots: list[FieldElement]) -> RotationCases:
    a, b, c = rotation
    lambdas, mus = f.lambdas, f.mus
    la, lb, lc = lambdas[a], lambdas[b], lambdas[c]
    ma, mb, mc = mus[a], mus[b], mus[c]
    omega = first_true(roots, pred=lambda w: (la + lb + w * lc).is_zero() and (ma + mb + w.inverse() * mc).is_zero())
    return RotationCases(
        root_twist=omega is not None,
        omega=omega,
        tail_vanishes=(la + lb + ma + mb).is_zero() and lc.is_zero() and mc.is_zero(),
        pairwise_cancel=(la + lb).is_zero() and (ma + mb).is_zero() and (lc + mc).is_zero(),
        head_vanishes=la.is_zero() and ma.is_zero() and (mb + lc).is_zero() and (lb + mc).is_zero(),
    )


def case_analysis(f: MultilinearCubic, n: int, field: Optional[FieldDescriptor] = None) -> CaseReport:
    field = f.field if field is None else field
    if field != f.field:
        raise DescriptorMismatch(f"polynomial over {f.field} analysed over {field}")
    roots = nth_roots_of_unity(field, n)
    return CaseReport(rotations={name: rotation_cases(f, rotation, roots) for name, rotation in ROTATIONS.items()})


class ObstructionKind(str, enum.Enum):
    NONE = "NoObstruction"
    COMMUTATOR = "CommutatorForm"
    MIRROR = "MirrorForm"
    TOTAL_SUM = "NonzeroTotalSum"
    UNRESOLVED = "Unresolved"


@dataclasses.dataclass(frozen=True)
class ObstructionDiagnosis:
    kind: ObstructionKind
    note: str

    def to_primitive(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "note": self.note}


def is_mirror_form(f: MultilinearCubic) -> bool:
    """
    f = c (w - reverse(w)) for one monomial w, e.g. c (xyz - zyx)
    """
    pairs = list(zip(f.lambdas, f.mus))
    nonzero = [(l, m) for l, m in pairs if not (l.is_zero() and m.is_zero())]
    return len(nonzero) == 1 and not nonzero[0][0].is_zero() and (nonzero[0][0] + nonzero[0][1]).is_zero()


def diagnose_obstruction(f: MultilinearCubic, n: int, field: Optional[FieldDescriptor] = None, report: Optional[CaseReport] = None) -> ObstructionDiagnosis:
    """
    When every rotation is blocked, name the special family the blocking equations force f into
    """
    # deferred: the commutator matcher lives with the witness paths, which import this module
    from poly_images.paths.commutator import match_commutator_form

    report = case_analysis(f, n, field) if report is None else report
    if not report.blocked_everywhere():
        return ObstructionDiagnosis(ObstructionKind.NONE, f"rotations {', '.join(report.free_rotations())} admit the structured construction")
    match = match_commutator_form(f)
    if match is not None:
        return ObstructionDiagnosis(
            ObstructionKind.COMMUTATOR,
            f"f is {match.scale.to_primitive()} times a[b,c] - ({match.lam.to_primitive()})[b,c]a with a = {match.leading}",
        )
    if is_mirror_form(f):
        return ObstructionDiagnosis(ObstructionKind.MIRROR, "f is a multiple of w - reverse(w); surjectivity rests on the classification of such binomials")
    if not f.total_sum().is_zero():
        return ObstructionDiagnosis(ObstructionKind.TOTAL_SUM, "total coefficient sum is nonzero, so f(T/s, I, I) = T for every T")
    return ObstructionDiagnosis(ObstructionKind.UNRESOLVED, "blocking equations hold for every rotation outside the known special families")


def determine_regime(field: FieldDescriptor, n: int, hint: RegimeHint = RegimeHint.CLOSURE) -> tuple[Regime, list[str]]:
    if hint == RegimeHint.GROUND:
        return Regime.OUT_OF_HYPOTHESES, [f"K = {field} is not algebraically closed"]
    p = field.characteristic()
    if p == 0:
        return Regime.CHAR0_CLOSED, ["characteristic 0, K algebraically closed"]
    if p in (2, 3):
        return Regime.OUT_OF_HYPOTHESES, [f"characteristic {p} is excluded"]
    notes = []
    if trivial_roots_regime(field, n):
        notes.append(f"1 is the only {n}-th root of unity in {field}, so the root condition holds vacuously")
    verdict = check_root_condition(field, n)
    if verdict.holds:
        return Regime.ROOT_CONDITION, notes + [f"root condition holds over {field} for n = {n}"]
    assert verdict.witness is not None
    witness = ", ".join(str(e.to_primitive()) for e in verdict.witness)
    return Regime.OUT_OF_HYPOTHESES, notes + [f"root condition fails over {field} for n = {n} at ({witness})"]


@dataclasses.dataclass(frozen=True)
class ImageClassification:
    verdict: Verdict
    regime: Regime
    notes: tuple[str, ...] = ()
    cases: Optional[CaseReport] = None

    def to_primitive(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "verdict": self.verdict.value,
            "regime": self.regime.value,
            "notes": list(self.notes),
        }
        if self.cases is not None:
            result["cases"] = self.cases.to_primitive()
        return result


def classify(f: MultilinearCubic, n: int, field: Optional[FieldDescriptor] = None, regime_hint: RegimeHint = RegimeHint.CLOSURE) -> ImageClassification:
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}", location="--n")
    field = f.field if field is None else field
    regime, notes = determine_regime(field, n, regime_hint)
    cases = case_analysis(f, n, field)

    if f.is_zero():
        return ImageClassification(Verdict.ZERO, regime, tuple(notes + ["f is the zero polynomial"]), cases)

    lambda_sum, mu_sum = f.coefficient_sums()
    if n == 1:
        # on 1x1 matrices f(a, b, c) = (total sum) abc
        if f.total_sum().is_zero():
            return ImageClassification(Verdict.TRACELESS, regime, tuple(notes + ["n = 1 and the total coefficient sum is 0: the image is {0} = sl_1"]), cases)
        return ImageClassification(Verdict.FULL, regime, tuple(notes + ["n = 1 and the total coefficient sum is nonzero"]), cases)

    infinite = regime_hint == RegimeHint.CLOSURE or not field.is_finite
    if lambda_sum.is_zero() and mu_sum.is_zero():
        if not infinite:
            return ImageClassification(Verdict.UNDETERMINED, regime, tuple(notes + ["traceless containment is only established over infinite fields"]), cases)
        if field.characteristic() in (2, 3):
            notes.append(f"traceless containment is not established in characteristic {field.characteristic()}")
            log.warning("classification of %s for n=%d over %s is undetermined", f, n, field)
            return ImageClassification(Verdict.UNDETERMINED, regime, tuple(notes), cases)
        notes.append("both coefficient sums vanish: the image lies in sl_n and contains every traceless matrix")
        return ImageClassification(Verdict.TRACELESS, regime, tuple(notes), cases)

    if not f.total_sum().is_zero():
        notes.append("total coefficient sum is nonzero: f(X, I, I) is a nonzero multiple of X")
    diagnosis = diagnose_obstruction(f, n, field, cases)
    if diagnosis.kind != ObstructionKind.NONE:
        notes.append(diagnosis.note)

    if regime == Regime.CHAR0_CLOSED:
        if n == 2:
            notes.append("n = 2 relies on the classification of multilinear images on 2x2 matrices over quadratically closed fields")
        elif n == 3:
            notes.append("n = 3 relies on the classification of multilinear images of degree 3 on 3x3 matrices")
        else:
            notes.append("J_n and the 2x2 block reduction cover every Jordan form")
        return ImageClassification(Verdict.FULL, regime, tuple(notes), cases)
    if regime == Regime.ROOT_CONDITION and n >= 4:
        notes.append("characteristic is not 2 or 3 and the root condition holds, n >= 4")
        return ImageClassification(Verdict.FULL, regime, tuple(notes), cases)

    notes.append("hypotheses of the surjectivity criterion are not established for this field and size")
    log.warning("classification of %s for n=%d over %s is undetermined", f, n, field)
    return ImageClassification(Verdict.UNDETERMINED, regime, tuple(notes), cases)


def verify_traceless_claim(
    f: MultilinearCubic, n: int, field: Optional[FieldDescriptor] = None, trials: int = 100, rng: Optional[random.Random] = None, box: int = DEFAULT_BOX
) -> bool:
    """
    Spot check that random values of f have trace 0
    """
    field = f.field if field is None else field
    lambda_sum, mu_sum = f.coefficient_sums()
    if not (lambda_sum.is_zero() and mu_sum.is_zero()):
        raise PreconditionViolated("traceless claim needs both coefficient sums to vanish")
    rng = random.Random(0) if rng is None else rng
    for _ in range(trials):
        X, Y, Z = (random_matrix(field, n, rng, box) for _ in range(3))
        if not f.eval(X, Y, Z).trace().is_zero():
            return False
    return True


if __name__ == "__main__":
    from poly_images.testing import find_and_run_unittests

    find_and_run_unittests(__file__)
