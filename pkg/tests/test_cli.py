"""Command-line front end: determinism, exit codes, config handling."""

import json
import subprocess
import sys

import pytest

from gradmod import cli


def run_cli(argv):
    return cli.main(argv)


def write_quadric(tmp_path):
    gens = tmp_path / "gens.txt"
    gens.write_text("2 1+0i (2 0)@e1 + 1+0i (0 2)@e1\n")
    return gens


# -- determinism ----------------------------------------------------------------


@pytest.mark.parametrize("argv_tail,files", [
    (["weights", "--family", "sinsqrt", "--r1", "1", "--r2", "4",
      "--d", "2", "--N", "120", "--p", "3,5"], ["weights.json", "weights.csv"]),
    (["counterexample", "--N", "48"], ["counterexample.json"]),
])
def test_reports_are_byte_identical(tmp_path, argv_tail, files):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert run_cli(argv_tail + ["--out", str(out1)]) == 0
    assert run_cli(argv_tail + ["--out", str(out2)]) == 0
    for name in files:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_submodule_report_deterministic(tmp_path):
    gens = write_quadric(tmp_path)
    argv = ["submodule", "--d", "2", "--N", "8", "--family", "hardy",
            "--gens", str(gens)]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli(argv + ["--out", str(out1)]) == 0
    assert run_cli(argv + ["--out", str(out2)]) == 0
    assert (out1 / "submodule.json").read_bytes() \
        == (out2 / "submodule.json").read_bytes()


# -- exit codes -------------------------------------------------------------------


def test_parse_error_exit_codes(tmp_path):
    assert run_cli(["weights", "--family", "sinsqrt", "--r1", "4", "--r2", "1",
                    "--N", "50", "--out", str(tmp_path)]) == cli.EXIT_PARSE
    assert run_cli(["submodule", "--d", "2", "--N", "8",
                    "--gens", str(tmp_path / "missing.txt"),
                    "--out", str(tmp_path)]) == cli.EXIT_PARSE
    bad = tmp_path / "bad.txt"
    bad.write_text("2 oops (2 0)@e1\n")
    assert run_cli(["submodule", "--d", "2", "--N", "8", "--gens", str(bad),
                    "--out", str(tmp_path)]) == cli.EXIT_PARSE
    assert run_cli(["submodule", "--d", "2",
                    "--gens", str(bad), "--out", str(tmp_path)]) == cli.EXIT_PARSE


def test_window_exhaustion_exit_code(tmp_path):
    gens = tmp_path / "tall.txt"
    gens.write_text("7 1+0i (7 0)@e1\n")
    code = run_cli(["submodule", "--d", "2", "--N", "8", "--gens", str(gens),
                    "--out", str(tmp_path)])
    assert code == cli.EXIT_WINDOW
    report = json.loads((tmp_path / "submodule.json").read_text())
    assert report["degree"]["determined"] is False      # partial report exists


def test_tolerance_failure_exit_code(tmp_path):
    gens = write_quadric(tmp_path)
    code = run_cli(["submodule", "--d", "2", "--N", "8", "--gens", str(gens),
                    "--tol", "1e-30", "--out", str(tmp_path)])
    assert code == cli.EXIT_TOLERANCE
    report = json.loads((tmp_path / "submodule.json").read_text())
    assert report["hard_failures"]


# -- config files ------------------------------------------------------------------


def test_config_file_and_flag_override(tmp_path):
    conf = tmp_path / "exp.conf"
    conf.write_text(
        "# quadric experiment\n"
        "d = 2\nN = 6\nfamily = hardy\np = 2\np = 3\n")
    gens = write_quadric(tmp_path)
    out = tmp_path / "out"
    code = run_cli(["submodule", "--config", str(conf), "--gens", str(gens),
                    "--N", "8", "--out", str(out)])
    assert code == 0
    report = json.loads((out / "submodule.json").read_text())
    assert report["config"]["N"] == 8          # flag beats file
    assert report["config"]["family"] == "hardy"
    assert report["config"]["d"] == 2


def test_malformed_config_rejected(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("no equals sign here\n")
    assert run_cli(["weights", "--config", str(conf), "--N", "50",
                    "--out", str(tmp_path)]) == cli.EXIT_PARSE


# -- report contents ----------------------------------------------------------------


def test_weights_csv_shape(tmp_path):
    assert run_cli(["weights", "--family", "hardy", "--d", "2", "--N", "40",
                    "--p", "2", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "weights.csv").read_text().strip().splitlines()
    assert lines[0] == "k,rho,diff,psum_p2"
    assert len(lines) == 41
    first = lines[1].split(",")
    assert first[0] == "0" and abs(float(first[1]) - 0.5**0.5) < 1e-12


def test_ev_report(tmp_path):
    vfile = tmp_path / "V.txt"
    vfile.write_text("1+0i\n0+0i\n")
    assert run_cli(["ev", "--d", "2", "--N", "8", "--V", str(vfile),
                    "--p", "2", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "ev.json").read_text())
    assert report["ev_dims"] == [1] * 9
    assert report["degree"]["degree"] == 1
    assert report["quotient_commutators"]["note"] == "evidence, not proof"


def test_koszul_report(tmp_path):
    assert run_cli(["koszul", "--d", "2", "--r", "3", "--N", "7",
                    "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "koszul.json").read_text())
    assert report["betti_numbers"] == [0, 0, 3]
    assert report["bsquared_residual"] <= 1e-12


def test_linearize_report(tmp_path):
    gens = write_quadric(tmp_path)
    assert run_cli(["linearize", "--d", "2", "--N", "9", "--family", "bergman",
                    "--gens", str(gens), "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "linearize.json").read_text())
    assert report["complete"] is True
    assert report["final_degree"] == 1
    assert report["final_multiplicity"] == 2


def test_identity_report(tmp_path):
    gens = write_quadric(tmp_path)
    assert run_cli(["identity", "--d", "2", "--N", "6", "--gens", str(gens),
                    "--nodes", "128", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "identity.json").read_text())
    assert report["resolvent"]["distance_to_oracle"] <= 1e-8
    assert all(c["slack"] >= 0 for c in report["resolvent"]["bound_checks"])


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gradmod.cli", "counterexample", "--N", "24",
         "--out", str(tmp_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert (tmp_path / "counterexample.json").exists()
