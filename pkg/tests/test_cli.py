import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from rhobound import Matrix, parse_matrix_text, read_matrix, write_matrix
from rhobound.cli import main
from rhobound.fileio import format_matrix
from rhobound.reference import BOUNDS_3X3, COMPARE_A, COMPARE_B, CONTRACT_6X6

DOCS = Path(__file__).resolve().parent.parent / "docs"
REPORT_SCHEMA = json.loads((DOCS / "report-schema.json").read_text())


def write_lines(path, matrix):
    path.write_text("\n".join(" ".join(repr(float(v)) for v in row) for row in matrix) + "\n")


@pytest.fixture
def m3(tmp_path):
    path = tmp_path / "m3.txt"
    write_lines(path, BOUNDS_3X3)
    return str(path)


@pytest.fixture
def m6(tmp_path):
    path = tmp_path / "m6.txt"
    write_lines(path, CONTRACT_6X6)
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--output", "json", "--deterministic"])
    payload = json.loads(capsys.readouterr().out)
    jsonschema.validate(payload, REPORT_SCHEMA)
    return code, payload


class TestRho:
    def test_text_output(self, capsys, m3):
        assert main(["rho", m3]) == 0
        out = capsys.readouterr().out
        assert "value" in out and "converged  = yes" in out

    def test_json_output(self, capsys, m3):
        code, payload = run_json(capsys, ["rho", m3])
        assert code == 0
        assert payload["rho"]["lower"] <= payload["rho"]["value"] <= payload["rho"]["upper"]

    def test_zero_matrix(self, capsys, tmp_path):
        path = tmp_path / "zero.txt"
        path.write_text("0 0\n0 0\n")
        assert main(["rho", str(path)]) == 0
        assert "value      = 0" in capsys.readouterr().out

    def test_missing_file_exits_2(self, capsys, tmp_path):
        assert main(["rho", str(tmp_path / "nope.txt")]) == 2
        assert "error" in capsys.readouterr().err


class TestBounds:
    def test_two_by_two_worked(self, capsys, m3):
        code, payload = run_json(
            capsys, ["bounds", m3, "--two-by-two", "--orientations", "row"]
        )
        assert code == 0
        assert payload["lower"] == pytest.approx(6.3588989435407, abs=1e-9)
        assert payload["upper"] == pytest.approx(8.2749172176354, abs=1e-9)

    def test_search_certificates_serialize(self, capsys, m3):
        code, payload = run_json(capsys, ["bounds", m3])
        assert code == 0
        for key in ("lower_certificate", "upper_certificate"):
            steps = payload[key]["steps"]
            assert steps and all("partition" in s for s in steps)

    def test_depth_guard(self, capsys, m3):
        assert main(["bounds", m3, "--depth", "3"]) == 2
        assert "allow_deep" in capsys.readouterr().err
        assert main(["bounds", m3, "--depth", "3", "--allow-deep"]) == 0
        capsys.readouterr()

    def test_display_base(self, capsys, m3):
        assert main(["bounds", m3, "--two-by-two", "--orientations", "row"]) == 0
        one_based = capsys.readouterr().out
        assert "{1,3}{2}" in one_based  # worked example's best lower bipartition
        assert main(["bounds", m3, "--two-by-two", "--orientations", "row", "--zero-based"]) == 0
        zero_based = capsys.readouterr().out
        assert "{0,2}{1}" in zero_based


class TestContract:
    def test_worked_6x6(self, capsys, m6):
        code = main(
            ["contract", m6, "--partition", "0,1,1,1,2,2", "--direction", "down", "--orientation", "row"]
        )
        assert code == 0
        matrix = parse_matrix_text(capsys.readouterr().out)
        assert matrix == Matrix([[1, 5, 8], [0, 3, 1], [0, 4, 2]])

    def test_adjust_and_exact_check(self, capsys, m6):
        code = main(
            [
                "contract", m6, "--partition", "0,1,1,1,2,2", "--direction", "up",
                "--orientation", "col", "--adjust", "--exact-check",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "# adjusted" in out

    def test_bad_partition_string(self, capsys, m6):
        assert main(["contract", m6, "--partition", "0,x", "--direction", "down"]) == 2
        capsys.readouterr()

    def test_output_reparses_bitwise(self, capsys, tmp_path):
        rng = np.random.default_rng(3)
        path = tmp_path / "r.txt"
        entries = rng.random((4, 4)) * 3
        write_lines(path, entries)
        code = main(["contract", str(path), "--partition", "0,0,1,1", "--direction", "down"])
        assert code == 0
        printed = parse_matrix_text(capsys.readouterr().out)
        from rhobound import ContractionSpec, IndexPartition, contract

        expected = contract(Matrix(entries), ContractionSpec(IndexPartition([0, 0, 1, 1]), "down"))
        assert printed == expected


class TestExpand:
    def write_plan(self, tmp_path, plan):
        path = tmp_path / "plan.json"
        path.write_text(json.dumps(plan))
        return str(path)

    def test_seeded_plan(self, capsys, tmp_path):
        m2 = tmp_path / "m2.txt"
        write_lines(m2, [[5, 7], [2, 4]])
        plan = self.write_plan(
            tmp_path, {"sizes": [2, 3], "orientation": "row", "fill": {"kind": "seeded-random", "seed": 1}}
        )
        code, payload = run_json(capsys, ["expand", str(m2), "--plan", plan, "--exact-check"])
        assert code == 0
        assert payload["rho_preserved"] is True
        assert len(payload["expanded"]) == 5

    def test_mixed_plan(self, capsys, tmp_path):
        m2 = tmp_path / "m2.txt"
        write_lines(m2, [[5, 8], [7, 3]])
        plan = self.write_plan(tmp_path, {"sizes": [2, 2], "orientation": "mixed"})
        code, payload = run_json(capsys, ["expand", str(m2), "--plan", plan])
        assert code == 0
        assert payload["rho_preserved"] is True

    def test_seed_flag_overrides(self, capsys, tmp_path):
        m2 = tmp_path / "m2.txt"
        write_lines(m2, [[5, 7], [2, 4]])
        plan = self.write_plan(tmp_path, {"sizes": [2, 2], "fill": {"kind": "seeded-random", "seed": 1}})
        _, with_seed1 = run_json(capsys, ["expand", str(m2), "--plan", plan])
        _, with_seed9 = run_json(capsys, ["expand", str(m2), "--plan", plan, "--seed", "9"])
        _, with_seed9_again = run_json(capsys, ["expand", str(m2), "--plan", plan, "--seed", "9"])
        assert with_seed9 == with_seed9_again
        assert with_seed1 != with_seed9

    def test_plan_size_mismatch_exits_2(self, capsys, tmp_path, m3):
        plan = self.write_plan(tmp_path, {"sizes": [2, 2]})
        assert main(["expand", m3, "--plan", plan]) == 2
        capsys.readouterr()


class TestCompare:
    def test_worked_example(self, capsys, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        write_lines(a, COMPARE_A)
        write_lines(b, COMPARE_B)
        code, payload = run_json(
            capsys,
            ["compare", str(a), str(b), "--orientations", "row", "--max-blocks", "2"],
        )
        assert code == 0
        assert payload["conclusion"] == "A_le_B"
        assert payload["a_trail"]["steps"][0]["partition"] == [0, 1, 1, 0]

    def test_inconclusive_exits_1(self, capsys, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        a.write_text("2\n")
        b.write_text("1\n")
        code, payload = run_json(capsys, ["compare", str(a), str(b)])
        assert code == 1
        assert payload["conclusion"] == "inconclusive"


class TestPaperExamples:
    def test_all_pass(self, capsys):
        assert main(["paper-examples"]) == 0
        out = capsys.readouterr().out
        assert "7/7 examples passed" in out
        assert "FAIL" not in out

    def test_json_payload(self, capsys):
        code, payload = run_json(capsys, ["paper-examples"])
        assert code == 0
        assert payload["passed"] is True
        assert len(payload["results"]) == 7


class TestInputHandling:
    def test_comments_and_commas(self, tmp_path):
        path = tmp_path / "m.txt"
        path.write_text("# header\n1, 2\n3 4  # trailing\n")
        assert read_matrix(path) == Matrix([[1, 2], [3, 4]])

    def test_ragged_rejected(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 2\n3\n")
        assert main(["rho", str(path)]) == 2
        assert "ragged" in capsys.readouterr().err

    def test_negative_entry_rejected(self, capsys, tmp_path):
        path = tmp_path / "neg.txt"
        path.write_text("1 2\n-3 4\n")
        assert main(["rho", str(path)]) == 2
        capsys.readouterr()

    def test_json_input(self, capsys, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"entries": [[1, 2], [3, 4]]}))
        assert main(["rho", str(path)]) == 0
        capsys.readouterr()

    def test_unknown_flag_exits_2(self, m3):
        with pytest.raises(SystemExit) as exc:
            main(["rho", m3, "--frobnicate"])
        assert exc.value.code == 2

    def test_round_trip_bitwise(self, tmp_path):
        rng = np.random.default_rng(5)
        weird = Matrix([[0.1, 1 / 3], [5e-17, rng.random()]])
        path = tmp_path / "w.txt"
        write_matrix(weird, path)
        assert read_matrix(path) == weird
        assert parse_matrix_text(format_matrix(weird)) == weird

    def test_env_tol_override(self, capsys, m3, monkeypatch):
        monkeypatch.setenv("RHOBOUND_TOL", "not-a-number")
        assert main(["rho", m3]) == 2
        capsys.readouterr()
        monkeypatch.setenv("RHOBOUND_TOL", "1e-6")
        assert main(["rho", m3]) == 0
        capsys.readouterr()


class TestDeterminism:
    def run_cli(self, args, cwd):
        return subprocess.run(
            [sys.executable, "-m", "rhobound", *args],
            capture_output=True, cwd=cwd, check=False,
        )

    def test_seeded_commands_byte_identical(self, tmp_path):
        m2 = tmp_path / "m2.txt"
        write_lines(m2, [[5, 7], [2, 4]])
        (tmp_path / "plan.json").write_text(
            json.dumps({"sizes": [3, 2], "fill": {"kind": "seeded-random", "seed": 11}})
        )
        argv = ["expand", "m2.txt", "--plan", "plan.json", "--output", "json", "--deterministic"]
        first = self.run_cli(argv, tmp_path)
        second = self.run_cli(argv, tmp_path)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout

    def test_bounds_byte_identical(self, tmp_path):
        m3 = tmp_path / "m3.txt"
        write_lines(m3, BOUNDS_3X3)
        argv = ["bounds", "m3.txt", "--output", "json", "--deterministic"]
        first = self.run_cli(argv, tmp_path)
        second = self.run_cli(argv, tmp_path)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout

    def test_timestamp_only_without_deterministic(self, tmp_path):
        m3 = tmp_path / "m3.txt"
        write_lines(m3, BOUNDS_3X3)
        with_stamp = self.run_cli(["bounds", "m3.txt", "--output", "json"], tmp_path)
        without = self.run_cli(
            ["bounds", "m3.txt", "--output", "json", "--deterministic"], tmp_path
        )
        stamped = json.loads(with_stamp.stdout)
        plain = json.loads(without.stdout)
        assert "generated_at" in stamped and "generated_at" not in plain
        stamped.pop("generated_at")
        assert stamped == plain
