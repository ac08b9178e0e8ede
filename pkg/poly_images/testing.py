import random
from typing import Optional
import pathlib
import unittest

from poly_images.fields import DEFAULT_BOX, FieldDescriptor, sample_element
from poly_images.jordan import JordanData
from poly_images.polynomials import MultilinearCubic


PACKAGE_ROOT = pathlib.Path(__file__).resolve().parent
TESTS_ROOT = PACKAGE_ROOT.parent / "tests"


def find_test_files(filename: str) -> list[pathlib.Path]:
    """
    Test modules for a source file of this package

    tests/ mirrors poly_images/, so poly_images/paths/core.py is covered by tests/paths/test_core.py.
    """
    module = pathlib.Path(filename).resolve()
    if PACKAGE_ROOT not in module.parents:
        return []
    candidate = TESTS_ROOT / module.parent.relative_to(PACKAGE_ROOT) / f"test_{module.stem}.py"
    return [candidate] if candidate.is_file() else []


def find_and_run_unittests(filename: str) -> bool:
    """
    Run the mirrored test module of a source file, as `python -m poly_images.<module>` does
    """
    ok = True
    for testfile in find_test_files(filename):
        tests = unittest.defaultTestLoader.discover(str(testfile.parent), pattern=testfile.name, top_level_dir=str(testfile.parent))
        ok = unittest.TextTestRunner().run(tests).wasSuccessful() and ok
    return ok


def random_cubic(field: FieldDescriptor, rng: random.Random, box: int = DEFAULT_BOX) -> MultilinearCubic:
    return MultilinearCubic(tuple(sample_element(field, rng, box) for _ in range(6)))


def random_jn_target(field: FieldDescriptor, n: int, rng: random.Random, box: int = DEFAULT_BOX, support: Optional[list[int]] = None) -> JordanData:
    """
    A target in J_n; without an explicit support, nu is zero or has at least two nonzero entries
    """
    d = tuple(sample_element(field, rng, box) for _ in range(n))
    if support is None:
        size = rng.choice([0] + list(range(2, n + 1)))
        support = sorted(rng.sample(range(n), size))
    nu = [field.zero()] * n
    for i in support:
        while nu[i].is_zero():
            nu[i] = sample_element(field, rng, box)
    return JordanData(d=d, nu=tuple(nu))
