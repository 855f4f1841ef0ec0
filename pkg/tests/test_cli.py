import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fpsearch.cli import main
from fpsearch.qsim import load_state
from fpsearch.schedule import nest


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def usage_exit(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    capsys.readouterr()
    return exc.value.code


def same_angle(a, b):
    return abs(math.remainder(a - b, 2 * math.pi)) < 1e-12


def test_phases_pi3(capsys):
    code, out, _ = run_cli(capsys, "phases", "--l", "1", "--delta-sq", "0")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["alphas"][0] == pytest.approx(-math.pi / 3)
    assert data["betas"][0] == pytest.approx(math.pi / 3)


def test_phases_grover(capsys):
    _, out, _ = run_cli(capsys, "phases", "--l", "2", "--delta-sq", "1")
    data = json.loads(out)
    assert all(same_angle(a, math.pi) for a in data["alphas"])
    assert all(same_angle(b, -math.pi) for b in data["betas"])


def test_phases_nest_csv(capsys):
    _, out, _ = run_cli(capsys, "phases", "--l", "1", "--nest", "1", "--delta-sq", "0", "--format", "csv")
    rows = list(csv.DictReader(out.splitlines()))
    ref = nest(1, 1, 0.0)
    assert len(rows) == 4
    for row, a, b in zip(rows, ref.alphas, ref.betas):
        assert float(row["alpha"]) == a and float(row["beta"]) == b


def test_phases_17_digits(capsys):
    _, out, _ = run_cli(capsys, "phases", "--l", "3", "--delta-sq", "0.1", "--format", "csv")
    for row in list(csv.DictReader(out.splitlines())):
        mantissa = row["alpha"].lstrip("-").split("e")[0].replace(".", "").lstrip("0")
        assert len(mantissa) <= 17


def test_phases_usage_errors(capsys):
    assert usage_exit(capsys, "phases", "--l", "1", "--delta-sq", "2") == 2
    assert usage_exit(capsys, "phases", "--l", "1", "--delta-sq", "0.1", "--nest", "0") == 2
    assert usage_exit(capsys, "phases", "--delta-sq", "0.1") == 2


def test_minl(capsys):
    _, out, _ = run_cli(capsys, "minl", "--delta-sq", "0.1", "--lambda0", "0.25")
    row = list(csv.DictReader(out.splitlines()))[0]
    assert int(row["queries"]) == 4
    _, out, _ = run_cli(capsys, "minl", "--delta-sq", "1", "--lambda0", "0.5", "--format", "json")
    assert json.loads(out)["queries"] == 0
    _, out, _ = run_cli(capsys, "minl", "--delta-sq", "0.1", "--lambda0", "0.03", "--format", "json")
    data = json.loads(out)
    assert data["schema"] == 1 and data["L"] == 11


def test_minl_rejects_delta_zero(capsys):
    assert usage_exit(capsys, "minl", "--delta-sq", "0", "--lambda0", "0.1") == 2


def test_sweep_columns_and_values(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = run_cli(
        capsys, "sweep", "--delta-sq", "0.1", "--l", "2", "--lambda-min", "0.01",
        "--lambda-max", "1", "--points", "50", "--pi3-k", "2", "--out", str(out),
    )
    assert code == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert list(rows[0]) == ["lambda", "fp_sim_l2", "fp_closed_l2", "grover_l2", "pi3_k2"]
    lams = [float(r["lambda"]) for r in rows]
    assert lams == sorted(lams)
    for r in rows:
        lam = float(r["lambda"])
        assert abs(float(r["fp_sim_l2"]) - float(r["fp_closed_l2"])) <= 1e-9
        assert float(r["pi3_k2"]) == pytest.approx(1 - (1 - lam) ** 9, abs=1e-12)
        assert all(0.0 <= float(v) <= 1.0 for v in r.values())
    assert float(rows[-1]["fp_sim_l2"]) == pytest.approx(1.0, abs=1e-12)
    assert float(rows[-1]["fp_closed_l2"]) == pytest.approx(1.0, abs=1e-12)
    meta = json.loads((tmp_path / "s.csv.meta.json").read_text())
    assert meta["schema"] == 1 and meta["columns"] == list(rows[0])


def test_sweep_is_byte_stable(tmp_path, capsys):
    args = ["sweep", "--delta-sq", "0.5", "--l", "1,3", "--points", "30", "--spacing", "linear",
            "--lambda-min", "0.05"]
    run_cli(capsys, *args, "--out", str(tmp_path / "a.csv"))
    run_cli(capsys, *args, "--out", str(tmp_path / "b.csv"))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.csv.meta.json").read_bytes() == (tmp_path / "b.csv.meta.json").read_bytes()


def test_sweep_json(capsys):
    _, out, _ = run_cli(capsys, "sweep", "--delta-sq", "0.1", "--l", "1", "--points", "5",
                        "--references", "closed_form", "--format", "json")
    data = json.loads(out)
    assert data["schema"] == 1
    assert data["columns"] == ["lambda", "fp_sim_l1", "fp_closed_l1"]
    assert np.array(data["rows"]).shape == (5, 3)


def test_sweep_unwritable(capsys):
    code, _, err = run_cli(capsys, "sweep", "--delta-sq", "0.1", "--l", "1", "--points", "3",
                           "--out", "/nonexistent-dir/x.csv")
    assert code == 3 and "cannot write" in err


def test_sweep_bad_grid(capsys):
    assert usage_exit(capsys, "sweep", "--delta-sq", "0.1", "--l", "1", "--lambda-min", "0") == 2
    assert usage_exit(capsys, "sweep", "--delta-sq", "0.1", "--l", "1", "--points", "1") == 2


def test_simulate_direct(capsys):
    _, out, _ = run_cli(capsys, "simulate", "--n", "10", "--num-marked", "4", "--l", "4",
                        "--delta-sq", "0.1", "--engine", "direct", "--format", "json")
    data = json.loads(out)
    assert data["schema"] == 1 and data["queries"] == 8 and data["L"] == 9
    assert data["abs_diff"] <= 1e-9


def test_simulate_trivial(capsys):
    _, out, _ = run_cli(capsys, "simulate", "--n", "1", "--marked", "1", "--l", "0", "--format", "json")
    assert json.loads(out)["p_sim"] == pytest.approx(0.5)


def test_simulate_engines_agree(capsys):
    base = ["simulate", "--n", "8", "--marked", "3,77,100", "--l", "3", "--delta-sq", "0.2", "--format", "json"]
    results = {}
    for engine in ("2d", "direct", "circuit"):
        _, out, _ = run_cli(capsys, *base, "--engine", engine)
        results[engine] = json.loads(out)
    assert abs(results["direct"]["p_sim"] - results["circuit"]["p_sim"]) <= 1e-10
    assert abs(results["2d"]["p_sim"] - results["direct"]["p_sim"]) <= 1e-9
    assert results["circuit"]["ancilla_leak"] <= 1e-20


def test_simulate_text_report(capsys):
    _, out, _ = run_cli(capsys, "simulate", "--n", "4", "--num-marked", "2", "--l", "1", "--engine", "circuit")
    for key in ("lambda", "L", "queries", "p_sim", "p_closed", "abs_diff", "ancilla_leak"):
        assert key in out


def test_simulate_dump(tmp_path, capsys):
    path = tmp_path / "psi.bin"
    run_cli(capsys, "simulate", "--n", "5", "--num-marked", "1", "--l", "2", "--delta-sq", "0.1",
            "--dump", str(path))
    state, n, flags = load_state(path)
    assert n == 5 and flags == 0 and state.size == 32
    assert np.linalg.norm(state) == pytest.approx(1.0)


def test_simulate_usage_errors(capsys):
    assert usage_exit(capsys, "simulate", "--n", "3", "--marked", "8") == 2
    assert usage_exit(capsys, "simulate", "--n", "17", "--marked", "0") == 2
    assert usage_exit(capsys, "simulate", "--n", "3") == 2
    assert usage_exit(capsys, "simulate", "--n", "3", "--num-marked", "1", "--engine", "2d", "--dump", "x") == 2


def test_verify_quick(capsys):
    code, out, _ = run_cli(capsys, "verify", "--quick")
    assert code == 0
    assert "suites passed" in out


def test_verify_json(capsys):
    code, out, _ = run_cli(capsys, "verify", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1 and data["passed"]


def test_verify_detects_broken_acot(capsys, monkeypatch):
    from fpsearch import schedule

    monkeypatch.setattr(schedule, "acot", lambda y: math.pi / 2 if y == 0 else -math.atan(1.0 / y))
    code, out, err = run_cli(capsys, "verify", "--quick")
    assert code == 1
    assert "FAIL" in out and "failing" in err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fpsearch.cli", "minl", "--delta-sq", "0.1", "--lambda0", "0.25"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.splitlines()[1].startswith("5,4,")
