import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from troprank import matrix_from_json
from troprank.sampler import validate_report

from conftest import FIXTURES, load_json

SIGMA = str(FIXTURES / "example33_sigma.json")
SYM_A = str(FIXTURES / "example33_A.json")
LIFT_Q = str(FIXTURES / "lifting_sigmaA_Q.json")
LIFT_F3 = str(FIXTURES / "lifting_sigmaA_F3.json")


def run_cli(*args, check=False):
    proc = subprocess.run(
        [sys.executable, "-m", "troprank", *map(str, args)],
        capture_output=True, text=True,
    )
    if check:
        assert proc.returncode == 0, proc.stderr
    return proc


def out_json(proc):
    return json.loads(proc.stdout)


def write_json(path: Path, payload) -> str:
    path.write_text(json.dumps(payload))
    return str(path)


class TestBasicCommands:
    def test_help(self):
        proc = run_cli("--help")
        assert proc.returncode == 0
        assert "subcommand" in proc.stdout or "usage" in proc.stdout

    def test_missing_command_is_a_usage_error(self):
        proc = run_cli()
        assert proc.returncode == 2
        assert "required" in proc.stderr

    def test_permanent(self):
        proc = run_cli("permanent", SIGMA, check=True)
        assert out_json(proc) == {
            "permanent": "g:0",
            "is_tangible": False,
            "nonsingular": False,
        }

    def test_permanent_rejects_rectangular(self, tmp_path):
        path = write_json(tmp_path / "rect.json", {
            "rows": ["1"], "cols": ["1", "2"], "entries": [["t:0", "t:1"]],
        })
        proc = run_cli("permanent", path)
        assert proc.returncode == 1
        assert "error:" in proc.stderr

    def test_permanent_size_cap_exits_3(self, tmp_path):
        n = 11
        path = write_json(tmp_path / "big.json", {
            "rows": [str(i) for i in range(n)],
            "cols": [f"c{i}" for i in range(n)],
            "entries": [["t:0"] * n for _ in range(n)],
        })
        proc = run_cli("permanent", path)
        assert proc.returncode == 3

    def test_rank_exhaustive(self):
        proc = run_cli("rank", SIGMA, check=True)
        data = out_json(proc)
        assert data["tropical_rank"] == 1
        assert data["mode"] == "exhaustive"
        assert len(data["witness_rows"]) == 1 == len(data["witness_cols"])

    def test_rank_randomized_is_flagged(self):
        proc = run_cli("rank", SIGMA, "--randomized", 40, check=True)
        data = out_json(proc)
        assert data["mode"] == "randomized"
        assert data["certified"] == "lower bound only"
        assert data["tropical_rank"] <= data["uncertified_upper"]

    def test_missing_file(self):
        proc = run_cli("rank", "no-such-file.json")
        assert proc.returncode == 1
        assert "cannot read" in proc.stderr

    def test_invalid_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        proc = run_cli("rank", str(bad))
        assert proc.returncode == 1
        assert "not valid JSON" in proc.stderr


class TestSymmetrizeCommands:
    def test_sigma_collapses_the_reference(self):
        proc = run_cli("sigma", SYM_A, check=True)
        assert out_json(proc) == load_json("example33_sigma.json")

    def test_symmetrize_space_separated_labels(self):
        proc = run_cli("symmetrize", SIGMA, "--I", "1", "2", "3",
                       "--J", "4", "5", "6", check=True)
        assert out_json(proc) == load_json("example33_A.json")

    def test_symmetrize_comma_separated_labels(self):
        proc = run_cli("symmetrize", SIGMA, "--I", "1,2,3", "--J", "4,5,6",
                       check=True)
        assert out_json(proc) == load_json("example33_A.json")

    def test_symmetrize_defaults_to_matrix_labels(self):
        proc = run_cli("symmetrize", SIGMA, check=True)
        data = out_json(proc)
        assert data["I"] == ["1", "2", "3"]
        assert data["J"] == ["4", "5", "6"]

    def test_verify_additivity(self):
        proc = run_cli("verify-additivity", SYM_A, check=True)
        assert out_json(proc) == {
            "trop_T": 4, "trop_sigma": 1, "I": 3, "holds": True,
        }


class TestSeriesCommands:
    def test_series_rank(self):
        proc = run_cli("series-rank", LIFT_Q, check=True)
        assert out_json(proc) == {"series_rank": 2}

    def test_lift_check_accepts_the_reference(self):
        proc = run_cli("lift-check", SIGMA, LIFT_Q, check=True)
        assert out_json(proc) == {"is_lifting": True}

    def test_lift_check_rejects_a_non_lifting(self, tmp_path):
        data = load_json("lifting_sigmaA_Q.json")
        data["entries"] = [[[] for _ in row] for row in data["entries"]]
        path = write_json(tmp_path / "zeroed.json", data)
        proc = run_cli("lift-check", SIGMA, path)
        assert proc.returncode == 2
        assert out_json(proc) == {"is_lifting": False}

    def test_lift_check_shape_mismatch_is_a_user_error(self):
        proc = run_cli("lift-check", SYM_A, LIFT_Q)
        assert proc.returncode == 1

    def test_full_lift_pipeline(self, tmp_path):
        lifted = run_cli("lift-transform", SYM_A, LIFT_Q, check=True)
        lift_path = write_json(tmp_path / "lifted.json", out_json(lifted))
        assert out_json(run_cli("series-rank", lift_path, check=True)) == {
            "series_rank": 5
        }
        reduced = run_cli("row-reduce", SYM_A, lift_path, check=True)
        red_path = write_json(tmp_path / "reduced.json", out_json(reduced))
        assert out_json(run_cli("series-rank", red_path, check=True)) == {
            "series_rank": 2
        }

    def test_field_coercion_matches_the_modular_fixture(self, tmp_path):
        via_q = run_cli("lift-transform", SYM_A, LIFT_Q, "--field", "Fp:3",
                        check=True)
        via_f3 = run_cli("lift-transform", SYM_A, LIFT_F3, check=True)
        assert out_json(via_q) == out_json(via_f3)

    def test_gf2_is_rejected(self):
        proc = run_cli("lift-transform", SYM_A, LIFT_Q, "--field", "Fp:2")
        assert proc.returncode == 1
        assert "GF(2)" in proc.stderr or "too small" in proc.stderr


class TestPhiCommands:
    @pytest.fixture()
    def phi_files(self, tmp_path):
        pattern = write_json(tmp_path / "pattern.json",
                             {"d": 1, "width": 1, "bits": [[1]]})
        phi = run_cli("build-phi", pattern, "--k", 2, check=True)
        phi_path = write_json(tmp_path / "phi.json", out_json(phi))
        tuple_path = write_json(tmp_path / "tuple.json", {
            "d": 1, "k": 2, "r": ["2", "2"], "u": ["1", "1"],
            "matrix": {"d": 1, "width": 1, "bits": [[1]]},
        })
        return phi_path, tuple_path, tmp_path

    def test_build_phi_coefficients(self, phi_files):
        phi_path, _, _ = phi_files
        data = json.loads(Path(phi_path).read_text())
        assert data["coeffs"] == {"1,2,1": "7/6", "1,2,2": "4/3"}
        assert data["entries"] == [["t:0", "t:7/6"], ["t:0", "t:4/3"]]

    def test_verify_phi_passes(self, phi_files):
        phi_path, tuple_path, _ = phi_files
        proc = run_cli("verify-phi", phi_path, tuple_path, check=True)
        data = out_json(proc)
        assert data["ok"] is True
        assert data["structure_ok"] is True
        assert data["good_conditions"]["cond1"] is True
        assert data["sweep"]["all_singular"] is True

    def test_verify_phi_fails_on_an_overclaimed_bound(self, phi_files):
        phi_path, _, tmp_path = phi_files
        lying = write_json(tmp_path / "lying.json", {
            "d": 1, "k": 2, "r": ["0", "0"], "u": ["1", "1"],
            "matrix": {"d": 1, "width": 1, "bits": [[1]]},
        })
        proc = run_cli("verify-phi", phi_path, lying)
        assert proc.returncode == 2
        data = out_json(proc)
        assert data["ok"] is False
        assert data["sweep"]["all_singular"] is False
        assert data["sweep"]["witness"] == {"rows": [0, 1], "cols": [0, 1]}

    def test_tampered_phi_payload_is_a_user_error(self, phi_files):
        phi_path, tuple_path, tmp_path = phi_files
        data = json.loads(Path(phi_path).read_text())
        data["coeffs"]["1,2,1"] = "3"
        bad = write_json(tmp_path / "bad_phi.json", data)
        proc = run_cli("verify-phi", bad, tuple_path)
        assert proc.returncode == 1
        assert "does not match" in proc.stderr


class TestSampleGood:
    def test_golden_sample(self):
        proc = run_cli("sample-good", "--d", 3, "--q", "1/20", "--seed", 42,
                       check=True)
        data = out_json(proc)
        assert data["matrix"]["bits"] == [[1] * 6] * 3
        assert data["stats"]["attempts"] == 1

    def test_deterministic_output(self):
        args = ("sample-good", "--d", 2, "--q", "1/11", "--seed", 3)
        assert run_cli(*args, check=True).stdout == run_cli(*args, check=True).stdout

    def test_out_of_range_q_needs_the_flag(self):
        proc = run_cli("sample-good", "--d", 2, "--q", "1/2", "--seed", 1)
        assert proc.returncode == 1
        assert "outside the guaranteed range" in proc.stderr

    def test_out_of_range_q_with_flag(self):
        proc = run_cli("sample-good", "--d", 2, "--q", "1/2", "--seed", 1,
                       "--allow-out-of-range", check=True)
        data = out_json(proc)
        assert data["matrix"]["bits"] == [[1, 1], [0, 1]]
        assert data["stats"]["ones_count"] == 3

    def test_exhausted_attempts_exit_3(self):
        proc = run_cli("sample-good", "--d", 2, "--q", "1/20", "--seed", 154,
                       "--attempts", 1)
        assert proc.returncode == 3
        assert "no good tuple in 1 attempts" in proc.stderr
        stats = json.loads(proc.stderr.split("\n", 1)[1])
        assert stats["cond1_failures"] == 1

    def test_bad_q_string(self):
        proc = run_cli("sample-good", "--d", 2, "--q", "fast", "--seed", 1)
        assert proc.returncode == 1
        assert "rational" in proc.stderr


class TestSeparate:
    def test_pipeline_writes_all_artifacts(self, tmp_path):
        out_dir = tmp_path / "run"
        proc = run_cli("separate", "--n", 12, "--alpha", "3/2", "--seed", 7,
                       "--out", str(out_dir), check=True)
        stdout_report = out_json(proc)
        validate_report(stdout_report)
        names = {"pattern.json", "tuple.json", "phi.json",
                 "phi_padded.json", "report.json"}
        assert {p.name for p in out_dir.iterdir()} == names
        disk_report = json.loads((out_dir / "report.json").read_text())
        assert disk_report == stdout_report
        assert stdout_report["files"]["phi_padded"] == "phi_padded.json"

        padded = matrix_from_json(
            json.loads((out_dir / "phi_padded.json").read_text())
        )
        assert padded.nrows == padded.ncols == 12
        assert stdout_report["exact_trop_rank"] == 5
        assert stdout_report["exact_trop_rank_phi"] == 5
        assert stdout_report["bounds_guaranteed"] is False

    def test_invalid_alpha_is_a_user_error(self, tmp_path):
        proc = run_cli("separate", "--n", 16, "--alpha", "1", "--seed", 0,
                       "--out", str(tmp_path / "x"))
        assert proc.returncode == 1
        assert "alpha" in proc.stderr


class TestBounds:
    def test_exact_u_for_a_perfect_square(self):
        proc = run_cli("bounds", "--d", 4, "--q", "1/20", check=True)
        data = out_json(proc)
        assert data["k"] == 4
        assert data["u"] == ["198/5", "198/5"]
        r_lo, r_hi = (Fraction(x) for x in data["r"])
        assert 0 < r_lo <= r_hi
        assert data["union"]["log_ratio_lt_minus1"] is True

    def test_huge_bound_strings_stay_ordered(self):
        proc = run_cli("bounds", "--d", 12, "--q", "1/111", check=True)
        data = out_json(proc)
        for key in ("hoeffding", "r", "u"):
            lo, hi = (Fraction(x) for x in data[key])
            assert lo <= hi
        lo, hi = (Fraction(x) for x in data["union"]["bound"])
        assert 0 <= lo <= hi

    def test_q_domain(self):
        proc = run_cli("bounds", "--d", 3, "--q", "7/5")
        assert proc.returncode == 1
