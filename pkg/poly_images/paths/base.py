import enum
import random
import logging
import dataclasses
from typing import TYPE_CHECKING, Any

from poly_images.budgets import Budgets
from poly_images.errors import VerificationFailed
from poly_images.matrices import Matrix
from poly_images.polynomials import MultilinearCubic

if TYPE_CHECKING:
    from poly_images.registry import PathRegistry

log = logging.getLogger(__name__)


class PathName(str, enum.Enum):
    CORE = "CoreJn"
    BLOCK_SPLIT = "BlockSplit"
    COMMUTATOR = "CommutatorForm"
    FALLBACK = "LinearFallback"


@dataclasses.dataclass(frozen=True)
class WitnessTriple:
    X: Matrix
    Y: Matrix
    Z: Matrix
    verified: bool
    path: PathName

    def arguments(self) -> tuple[Matrix, Matrix, Matrix]:
        return self.X, self.Y, self.Z

    def with_path(self, path: PathName) -> "WitnessTriple":
        return dataclasses.replace(self, path=path)

    def to_primitive(self) -> dict[str, Any]:
        return {
            "witness": {"X": self.X.to_primitive(), "Y": self.Y.to_primitive(), "Z": self.Z.to_primitive()},
            "path": self.path.value,
            "verified": self.verified,
        }


def verify_witness(f: MultilinearCubic, X: Matrix, Y: Matrix, Z: Matrix, target: Matrix, path: PathName) -> WitnessTriple:
    """
    Re-evaluate f on the candidate and only hand back triples that reproduce the target exactly
    """
    if f.eval(X, Y, Z) != target:
        raise VerificationFailed(f"{path.value} witness does not evaluate to the target")
    return WitnessTriple(X=X, Y=Y, Z=Z, verified=True, path=path)


@dataclasses.dataclass
class SolveContext:
    """
    Everything a path needs besides the problem itself; paths that delegate look their helpers up in `paths`
    """

    rng: random.Random
    budgets: Budgets
    paths: "PathRegistry"


class WitnessPath:
    name: PathName

    def solve(self, f: MultilinearCubic, target: Matrix, context: SolveContext) -> WitnessTriple:
        """
        Find (X, Y, Z) with f(X, Y, Z) = target, or raise

        Core and block-split paths expect the target in Jordan coordinates.
        """
        raise NotImplementedError("solve")
