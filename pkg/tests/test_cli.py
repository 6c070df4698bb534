import subprocess
import sys

import numpy as np
import pytest

from splitnull.cli import main
from splitnull.trace import TRACE_HEADER


def test_run_converging_problem_exits_zero(capsys):
    code = main(["run", "--problem", "problems/sfp_interval_1d.json"])
    out = capsys.readouterr().out
    assert code == 0
    assert "converged" in out


def test_run_budget_exhaustion_exits_two(tmp_path, capsys):
    trace = tmp_path / "t.csv"
    code = main(
        [
            "run",
            "--problem", "problems/sfp_box_5x3.json",
            "--max-iters", "10",
            "--trace", str(trace),
        ]
    )
    assert code == 2
    assert "budget" in capsys.readouterr().out
    lines = trace.read_text().splitlines()
    assert lines[0] == TRACE_HEADER
    assert len(lines) == 11  # header plus one row per iteration


def test_tol_override_allows_early_exit():
    code = main(
        ["run", "--problem", "problems/interval_scaling_1d.json", "--tol", "1e-2"]
    )
    assert code == 0


def test_missing_file_exits_one(capsys):
    code = main(["run", "--problem", "/no/such/file.json"])
    assert code == 1
    assert "not found" in capsys.readouterr().err


def test_invalid_document_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    code = main(["run", "--problem", str(bad)])
    assert code == 1
    assert "invalid problem file" in capsys.readouterr().err


def test_directory_path_exits_one(tmp_path, capsys):
    code = main(["run", "--problem", str(tmp_path)])
    assert code == 1
    err = capsys.readouterr().err
    assert "not a file" in err or "invalid" in err


def test_traces_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["run", "--problem", "problems/sfp_box_5x3.json", "--max-iters", "40"]
    assert main(args + ["--trace", str(a)]) == 2
    assert main(args + ["--trace", str(b)]) == 2
    assert a.read_bytes() == b.read_bytes()


def test_oracle_example_passes(capsys):
    code = main(["oracle-example", "--steps", "50"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out


def test_oracle_example_rejects_start_outside_interval(capsys):
    assert main(["oracle-example", "--x1", "1.5"]) == 1
    assert "must lie in [0, 1]" in capsys.readouterr().err


def test_check_properties_default_seed_passes(capsys):
    code = main(["check-properties"])
    out = capsys.readouterr().out
    assert code == 0
    assert "overall: PASS" in out


def test_check_properties_report_is_deterministic(capsys):
    assert main(["check-properties", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert main(["check-properties", "--seed", "7"]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_check_properties_detects_faulty_duality_map(monkeypatch, capsys):
    # corrupting the map the battery checks against must trip at least the
    # three-point identity row and flip the exit status
    import splitnull.geometry as geometry
    import splitnull.properties as properties

    real = geometry.duality_map

    def skewed(x, g):
        return real(x, g) * 1.001

    monkeypatch.setattr(properties, "duality_map", skewed)
    code = main(["check-properties"])
    out = capsys.readouterr().out
    assert code == 1
    line = next(l for l in out.splitlines() if l.startswith("phi_three_point"))
    assert "FAIL" in line


def test_console_module_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "splitnull.cli", "oracle-example", "--steps", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
