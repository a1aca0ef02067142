import io
import json
import subprocess
import sys

import numpy as np
import pytest

from tailshift.cli import main, read_series
from tailshift.variates import BurrParams, ChangeSpec, ModelSpec, replication_rng, simulate

HAND = "5\n1\n2\n3\n"


def write(tmp_path, text, name="series.txt"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def test_read_series_skips_blanks_and_comments(tmp_path):
    path = write(tmp_path, "# header\n\n1.5\n  # indented comment\n-2\n\n3e2\n")
    assert np.array_equal(read_series(path), [1.5, -2.0, 300.0])


def test_read_series_reports_line_number(tmp_path):
    path = write(tmp_path, "1\n2\nabc\n4\n")
    with pytest.raises(ValueError, match="line 3"):
        read_series(path)


def test_unparseable_line_exits_one(tmp_path, capsys):
    assert main(["test", write(tmp_path, "1\nups\n3\n4\n"), "--k", "2"]) == 1
    assert "line 2" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# test command
# ---------------------------------------------------------------------------

def test_hand_series_no_change(tmp_path, capsys):
    code = main(["test", write(tmp_path, HAND), "--k", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "decision: no change detected" in out
    assert "scaled_statistic: 0.53033" in out


def test_structured_output_round_trips(tmp_path, capsys):
    path = write(tmp_path, HAND)
    assert main(["test", path, "--k", "2", "--format", "structured"]) == 0
    first = capsys.readouterr().out
    record = json.loads(first)
    assert record["n"] == 4 and record["k"] == 2
    assert record["statistic"] == pytest.approx(0.530330, abs=1e-6)
    assert record["omega_hat"] is None
    assert record["reject"] is False
    assert record["tau_hat"] == 0.25
    # bit-identical rerun
    assert main(["test", path, "--k", "2", "--format", "structured"]) == 0
    assert capsys.readouterr().out == first


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(HAND))
    assert main(["test", "-", "--k", "2"]) == 0
    assert "decision" in capsys.readouterr().out


def test_negative_values_notice_and_no_abs(tmp_path, capsys):
    path = write(tmp_path, "5\n-1\n2\n3\n")
    assert main(["test", path, "--k", "2"]) == 0
    assert "absolute values" in capsys.readouterr().err
    assert main(["test", path, "--k", "2", "--no-abs"]) == 1
    assert "negative" in capsys.readouterr().err


def test_usage_errors_exit_one(tmp_path, capsys):
    single = write(tmp_path, "5\n")
    assert main(["test", single, "--k", "2"]) == 1
    capsys.readouterr()
    assert main(["test", write(tmp_path, HAND), "--k", "9"]) == 1  # k >= n
    capsys.readouterr()
    assert main(["test", write(tmp_path, HAND)]) == 1  # --k is required
    capsys.readouterr()
    assert main(["bogus-command"]) == 1
    capsys.readouterr()
    assert main(["test", str(tmp_path / "missing.txt"), "--k", "2"]) == 1


def test_change_detection_exits_two(tmp_path, capsys):
    model = ModelSpec("iid", BurrParams.from_alpha(3.0, -1.0))
    change = ChangeSpec(0.5, BurrParams.from_alpha(3.0, -1.0), BurrParams.from_alpha(0.8, -1.0))
    x = simulate(model, 2000, seed=1, change=change)
    path = write(tmp_path, "".join(f"{float(v)!r}\n" for v in x))
    code = main(["test", path, "--k", "100", "--format", "structured"])
    record = json.loads(capsys.readouterr().out)
    assert code == 2
    assert record["reject"] is True


def test_localization_monte_carlo(tmp_path, capsys):
    # tail exponent 3 -> 0.8 at mid-sample: detection with a localized change
    # point in at least 90% of seeded runs
    model = ModelSpec("iid", BurrParams.from_alpha(3.0, -1.0))
    change = ChangeSpec(0.5, BurrParams.from_alpha(3.0, -1.0), BurrParams.from_alpha(0.8, -1.0))
    path = str(tmp_path / "mc.txt")
    hits = 0
    for r in range(200):
        x = simulate(model, 2000, seed=replication_rng(424, r), change=change)
        with open(path, "w") as fh:
            fh.writelines(f"{float(v)!r}\n" for v in x)
        code = main(["test", path, "--k", "100", "--format", "structured"])
        record = json.loads(capsys.readouterr().out)
        if code == 2 and abs(record["tau_hat"] - 0.5) <= 0.1:
            hits += 1
    assert hits >= 180


# ---------------------------------------------------------------------------
# ar-test command
# ---------------------------------------------------------------------------

def test_ar_test_runs(tmp_path, capsys):
    from tailshift.variates import TDistParams

    x = simulate(ModelSpec("ar1", TDistParams(3.0), coef=0.5), 500, seed=6)
    path = write(tmp_path, "".join(f"{float(v)!r}\n" for v in x))
    code = main(["ar-test", path, "--k", "40", "--order", "1", "--format", "structured"])
    record = json.loads(capsys.readouterr().out)
    assert code in (0, 2)
    assert record["n"] == 499
    assert record["order"] == 1 and record["method"] == "ols"
    assert main(["ar-test", path, "--k", "40", "--order", "1"]) == code  # human format, same decision
    capsys.readouterr()
    assert main(["ar-test", path, "--k", "40", "--order", "1", "--method", "yule-walker"]) in (0, 2)
    capsys.readouterr()


def test_ar_test_requires_order(tmp_path, capsys):
    path = write(tmp_path, HAND)
    assert main(["ar-test", path, "--k", "2"]) == 1
    capsys.readouterr()


# ---------------------------------------------------------------------------
# critical-values command
# ---------------------------------------------------------------------------

def test_critical_values_analytic(capsys):
    assert main(["critical-values"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "level,critical_value,source"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values == pytest.approx([1.22387, 1.35810, 1.62762], abs=1e-3)


def test_critical_values_single_level_and_validation(capsys):
    assert main(["critical-values", "--levels", "0.5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    assert 0.8 < float(lines[1].split(",")[1]) < 0.9
    assert main(["critical-values", "--levels", "1.5"]) == 1
    capsys.readouterr()


def test_critical_values_mc(capsys):
    assert main(["critical-values", "--mc", "--paths", "1000", "--reps", "300", "--seed", "7"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values[0] < values[1] < values[2]
    assert "mc(paths=1000" in lines[1]
    assert values[1] == pytest.approx(1.358, abs=0.12)


# ---------------------------------------------------------------------------
# tables command
# ---------------------------------------------------------------------------

def test_tables_writes_grid(tmp_path, capsys):
    out = tmp_path / "t2.csv"
    report = tmp_path / "t2.json"
    code = main([
        "tables", "--table", "2", "--replications", "2", "--seed", "5",
        "--out", str(out), "--report", str(report),
    ])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1 + 4 * 10  # header + 4 rows x 10 k cells
    payload = json.loads(report.read_text())
    assert len(payload["results"]) == 4


def test_tables_stdout_and_bad_id(capsys):
    assert main(["tables", "--table", "6", "--replications", "1", "--seed", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1 + 2 * 10
    assert main(["tables", "--table", "99", "--replications", "1"]) == 1
    capsys.readouterr()


# ---------------------------------------------------------------------------
# simulate command
# ---------------------------------------------------------------------------

def test_simulate_outputs_parse_and_reproduce(capsys):
    argv = ["simulate", "--model", "iid-burr", "--alpha", "2", "--gamma", "-2",
            "--n", "40", "--seed", "3"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    values = [float(line) for line in first.strip().splitlines()]
    assert len(values) == 40 and all(v > 0 for v in values)
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_simulate_models_and_change(capsys):
    assert main(["simulate", "--model", "ma1-t", "--nu", "3", "--coef", "0.5",
                 "--n", "10", "--seed", "1"]) == 0
    capsys.readouterr()
    assert main(["simulate", "--model", "ar1-t", "--nu", "3", "--coef", "0.5",
                 "--n", "10", "--seed", "1", "--change-tau", "0.5", "--post-nu", "1"]) == 0
    capsys.readouterr()
    # missing parameters exit 1
    assert main(["simulate", "--model", "ma1-t", "--nu", "3", "--n", "10"]) == 1
    capsys.readouterr()
    assert main(["simulate", "--model", "iid-burr", "--alpha", "2", "--n", "10"]) == 1
    capsys.readouterr()


def test_simulate_pipes_into_test(tmp_path, capsys):
    out = tmp_path / "sim.txt"
    assert main(["simulate", "--model", "iid-burr", "--lam", "1", "--gamma", "-2",
                 "--n", "200", "--seed", "9", "--out", str(out)]) == 0
    assert main(["test", str(out), "--k", "20"]) in (0, 2)
    capsys.readouterr()


def test_env_seed_default(monkeypatch, capsys):
    monkeypatch.setenv("TAILSHIFT_SEED", "77")
    argv = ["simulate", "--model", "iid-burr", "--lam", "1", "--gamma", "-1", "--n", "5"]
    assert main(argv) == 0
    from_env = capsys.readouterr().out
    assert main(argv + ["--seed", "77"]) == 0
    assert capsys.readouterr().out == from_env  # flag with same value matches env default
    assert main(argv + ["--seed", "78"]) == 0
    assert capsys.readouterr().out != from_env  # flag overrides env
    monkeypatch.setenv("TAILSHIFT_SEED", "not-a-number")
    assert main(argv) == 1
    capsys.readouterr()


# ---------------------------------------------------------------------------
# console script wiring
# ---------------------------------------------------------------------------

def test_console_script_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "tailshift.cli", "test", "-", "--k", "2"],
        input=HAND, capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "decision: no change detected" in proc.stdout
