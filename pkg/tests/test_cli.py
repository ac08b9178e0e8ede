import json
import os
import pathlib
import unittest
from typing import Any

from click.testing import CliRunner

from poly_images.cli import main
from poly_images.fields import RATIONALS
from poly_images.matrices import Matrix
from poly_images.polynomials import MultilinearCubic

XYZ = {"field": "Q", "xyz": 1}
COMMUTATOR = {"xyz": 1, "yzx": -1}


class TestCli(unittest.TestCase):
    """
    Documents are read back from --output; stderr carries the log
    """

    def setUp(self):
        self.runner = CliRunner()

    def _invoke(self, args: list[str], files: dict[str, Any]) -> tuple[int, dict[str, Any]]:
        cwd = os.getcwd()
        for name, content in files.items():
            pathlib.Path(name).write_text(content if isinstance(content, str) else json.dumps(content))
        result = self.runner.invoke(main, args + ["--output", "out.json"], env={"XDG_CONFIG_HOME": cwd})
        document = json.loads(pathlib.Path("out.json").read_text())
        return result.exit_code, document

    def test_classify(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["classify", "--poly", "f.json", "--n", "5"], {"f.json": XYZ})
            assert exit_code == 0
            assert document["verdict"] == "Full"
            assert document["regime"] == "Char0AlgClosed"

    def test_classify_traceless(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["classify", "--poly", "f.json", "--n", "3", "--field", "Q"], {"f.json": COMMUTATOR})
            assert exit_code == 0
            assert document["verdict"] == "Traceless"

    def test_classify_undetermined(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["classify", "--poly", "f.json", "--n", "4", "--field", "gf:5"], {"f.json": {"xyz": 1}})
            assert exit_code == 2
            assert document["verdict"] == "Undetermined"

    def test_bad_json(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["classify", "--poly", "f.json", "--n", "3"], {"f.json": "{not json"})
            assert exit_code == 3
            assert document["error"]["code"] == "InvalidInput"
            assert document["error"]["location"] == "--poly"

    def test_bad_field(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["classify", "--poly", "f.json", "--n", "3", "--field", "gf:4"], {"f.json": {"xyz": 1}})
            assert exit_code == 3
            assert document["error"]["location"] == "--field"

    def test_solve(self):
        with self.runner.isolated_filesystem():
            target = [["1", "0", "0"], ["0", "2", "0"], ["0", "0", "3"]]
            exit_code, document = self._invoke(["solve", "--poly", "f.json", "--target", "t.json", "--seed", "3"], {"f.json": XYZ, "t.json": target})
            assert exit_code == 0
            assert document["path"] == "CoreJn"
            assert document["verified"]
            X, Y, Z = (Matrix.from_primitive(document["witness"][name]) for name in ("X", "Y", "Z"))
            f = MultilinearCubic.from_words(RATIONALS, {"xyz": 1})
            assert f.eval(X, Y, Z) == Matrix.diag(RATIONALS, [1, 2, 3])

    def test_solve_jordan(self):
        with self.runner.isolated_filesystem():
            target = {"d": ["1", "2", "3"], "nu": ["0", "0", "0"]}
            exit_code, document = self._invoke(["solve", "--poly", "f.json", "--target", "t.json", "--jordan"], {"f.json": XYZ, "t.json": target})
            assert exit_code == 0
            assert document["path"] == "CoreJn"

    def test_solve_unsplittable(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["solve", "--poly", "f.json", "--target", "t.json"], {"f.json": XYZ, "t.json": [[0, 1], [2, 0]]})
            assert exit_code == 2
            assert document["error"]["code"] == "TargetUnsplittable"

    def test_solve_size_mismatch(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["solve", "--poly", "f.json", "--target", "t.json", "--n", "3"], {"f.json": XYZ, "t.json": [[1, 0], [0, 1]]})
            assert exit_code == 3
            assert document["error"]["location"] == "--n"

    def test_check_cond(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["check-cond", "--field", "gf:5", "--n", "4"], {})
            assert exit_code == 0
            assert not document["holds"]
            assert len(document["witness"]) == 3
            exit_code, document = self._invoke(["check-cond", "--field", "Q", "--n", "6"], {})
            assert document == {"holds": True}

    def test_jordan(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["jordan", "--target", "t.json", "--field", "Q"], {"t.json": [[2, 1], [0, 2]]})
            assert exit_code == 0
            assert document["d"] == ["2", "2"]
            assert document["nu"] == ["1", "0"]
            assert document["class"] == "SingleTwoBlock"

    def test_oracle(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["oracle", "--poly", "f.json", "--n", "2", "--q", "3"], {"f.json": COMMUTATOR})
            assert exit_code == 0
            assert document["size"] == 27
            assert document["mode"] == "Exhaustive"
            assert document["is_subspace"]
            assert document["verdict_comparison"]["comparison"]["equal"]

    def test_oracle_sampled(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["oracle", "--poly", "f.json", "--n", "2", "--q", "3", "--samples", "50"], {"f.json": COMMUTATOR})
            assert exit_code == 0
            assert document["mode"] == "Sampled"
            assert document["samples"] == 50
            assert "is_subspace" not in document

    def test_oracle_conflicting_modes(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(
                ["oracle", "--poly", "f.json", "--n", "2", "--q", "3", "--samples", "5", "--exhaustive"], {"f.json": COMMUTATOR}
            )
            assert exit_code == 3
            assert document["error"]["location"] == "--samples"

    def test_config(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["config"], {})
            assert exit_code == 0
            assert document["budgets"]["box"] == 10
            assert document["paths"]["core"] == "poly_images.paths.core.CorePath"

    def test_config_file(self):
        with self.runner.isolated_filesystem():
            exit_code, document = self._invoke(["--config", "extra.toml", "config"], {"extra.toml": "[sampling]\nbox = 4\n"})
            assert exit_code == 0
            assert document["budgets"]["box"] == 4

    def test_bad_config(self):
        with self.runner.isolated_filesystem():
            pathlib.Path("extra.toml").write_text("[sampling]\nbox = 0\n")
            result = self.runner.invoke(main, ["--config", "extra.toml", "config"], env={"XDG_CONFIG_HOME": os.getcwd()})
            assert result.exit_code == 3
            result = self.runner.invoke(main, ["--config", "missing.toml", "config"], env={"XDG_CONFIG_HOME": os.getcwd()})
            assert result.exit_code == 3


if __name__ == "__main__":
    unittest.main()
