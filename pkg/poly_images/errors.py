from typing import Any, Optional

EXIT_OK = 0
EXIT_INCONCLUSIVE = 2
EXIT_INVALID = 3


class PolyImagesError(Exception):
    """
    Base of every error the library raises on purpose

    `code` is the machine-readable name used in CLI error documents, `exit_code` the process status it maps to.
    """

    code = "Error"
    exit_code = EXIT_INVALID

    def __init__(self, message: str = "", *, location: Optional[str] = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.location = location

    def to_primitive(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "message": self.message,
            "location": self.location,
        }


class InvalidInput(PolyImagesError):
    code = "InvalidInput"


class DescriptorMismatch(PolyImagesError):
    code = "DescriptorMismatch"


class DivisionByZero(PolyImagesError, ZeroDivisionError):
    code = "DivisionByZero"


class DimensionMismatch(PolyImagesError):
    code = "DimensionMismatch"


class NotSquare(PolyImagesError):
    code = "NotSquare"


class Inconsistent(PolyImagesError):
    code = "Inconsistent"
    exit_code = EXIT_INCONCLUSIVE


class Unsplittable(PolyImagesError):
    code = "Unsplittable"
    exit_code = EXIT_INCONCLUSIVE


class ZeroSampleEntry(PolyImagesError):
    code = "ZeroSampleEntry"


class Exhausted(PolyImagesError):
    code = "Exhausted"
    exit_code = EXIT_INCONCLUSIVE


class SamplerExhausted(Exhausted):
    code = "SamplerExhausted"

    def __init__(self, message: str = "", *, location: Optional[str] = None, last_determinants: Optional[list[str]] = None):
        super().__init__(message, location=location)
        self.last_determinants = last_determinants or []


class PreconditionViolated(PolyImagesError):
    code = "PreconditionViolated"


class TargetNotInJn(PolyImagesError):
    code = "TargetNotInJn"


class CaseObstruction(PolyImagesError):
    code = "CaseObstruction"
    exit_code = EXIT_INCONCLUSIVE


class UnsupportedSize(PolyImagesError):
    code = "UnsupportedSize"
    exit_code = EXIT_INCONCLUSIVE


class TargetUnsplittable(Unsplittable):
    code = "TargetUnsplittable"


class NotCommutatorForm(PolyImagesError):
    code = "NotCommutatorForm"


class DegenerateD(PolyImagesError):
    code = "DegenerateD"
    exit_code = EXIT_INCONCLUSIVE


class NonzeroTrace(PolyImagesError):
    code = "NonzeroTrace"


class InsufficientFieldSize(PolyImagesError):
    code = "InsufficientFieldSize"
    exit_code = EXIT_INCONCLUSIVE


class TooLarge(PolyImagesError):
    code = "TooLarge"


class ModeMismatch(PolyImagesError):
    code = "ModeMismatch"


class VerificationFailed(PolyImagesError):
    code = "VerificationFailed"
    exit_code = 1
