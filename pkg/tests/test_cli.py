import json
import subprocess
import sys

import pytest

from adaseries.cli import main

SIM_ARGS = ["simulate", "--model", "density", "--target", "f1", "--case", "1",
            "--n", "200", "--reps", "3", "--seed", "7"]


def test_simulate_writes_outputs(tmp_path, capsys):
    assert main(SIM_ARGS + ["--out", str(tmp_path)]) == 0
    assert (tmp_path / "raw.csv").exists()
    assert (tmp_path / "summary.csv").exists()
    meta = json.loads((tmp_path / "metadata.json").read_text())
    assert meta["experiment"]["seed"] == 7
    assert meta["experiment"]["c_gl"] == 72.0  # resolved theorem preset
    out = capsys.readouterr().out
    assert "oracle" in out


def test_simulate_deterministic_bytes(tmp_path):
    main(SIM_ARGS + ["--out", str(tmp_path / "a")])
    main(SIM_ARGS + ["--out", str(tmp_path / "b")])
    raw_a = (tmp_path / "a" / "raw.csv").read_bytes()
    raw_b = (tmp_path / "b" / "raw.csv").read_bytes()
    assert raw_a == raw_b


def test_simulate_workers_do_not_change_output(tmp_path):
    main(SIM_ARGS + ["--reps", "5", "--out", str(tmp_path / "w1"), "--workers", "1"])
    main(SIM_ARGS + ["--reps", "5", "--out", str(tmp_path / "w8"), "--workers", "8"])
    assert ((tmp_path / "w1" / "raw.csv").read_bytes()
            == (tmp_path / "w8" / "raw.csv").read_bytes())


def test_missing_target_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--model", "density", "--case", "1", "--n", "100",
              "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_bad_flag_value_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--model", "density", "--target", "f1", "--case", "9",
              "--n", "100", "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("""
[experiment]
model = density
target = f1
case = 1
n = 150
reps = 2
seed = 3
selectors = oracle,gl

[penalty]
c_gl = 2.5
""")
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--reps", "4",
                 "--out", str(out)]) == 0
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["experiment"]["reps"] == 4  # flag wins over file
    assert meta["experiment"]["n"] == 150
    assert meta["experiment"]["c_gl"] == 2.5
    assert meta["experiment"]["selectors"] == ["oracle", "gl"]


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[experiment]\nmodel = density\nbogus = 1\n")
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert exc.value.code == 2


def test_bands_output_shape(tmp_path):
    out = tmp_path / "bands"
    code = main(["bands", "--model", "density", "--target", "f2", "--case", "1",
                 "--n", "200", "--reps", "25", "--seed", "1", "--grid-size", "129",
                 "--c-pen", "2.0", "--out", str(out)])
    assert code == 0
    lines = (out / "bands.csv").read_text().strip().splitlines()
    assert len(lines) == 129 + 1  # header + grid rows
    header = lines[0].split(",")
    assert header == ["x", "truth", "median", "p05", "p95"]
    for line in lines[1:]:
        _, _, med, p05, p95 = map(float, line.split(","))
        assert p05 <= med <= p95


def test_calibrate_writes_choice(tmp_path):
    out = tmp_path / "cal"
    code = main(["calibrate", "--model", "density", "--target", "f1", "--case", "1",
                 "--n", "200", "--seed", "2", "--c-grid", "1,2,4",
                 "--calib-reps", "5", "--out", str(out)])
    assert code == 0
    meta = json.loads((out / "metadata.json").read_text())
    assert set(meta["calibrated"]) == {"gl", "ms"}
    assert meta["calibrated"]["gl"] in (1.0, 2.0, 4.0)
    body = (out / "calibration.csv").read_text().splitlines()
    assert body[0] == "selector,c,mean_ise"
    assert len(body) == 1 + 2 * 3


def test_check_fast_config_passes(tmp_path):
    cfg = tmp_path / "check.ini"
    cfg.write_text("""
[check]
ks_draws = 20000
case3_draws = 50000
lemma_reps = 5
fuzz_cases = 50
variance_reps = 100
""")
    code = main(["check", "--config", str(cfg), "--seed", "0",
                 "--ks-draws", "100000", "--out", str(tmp_path / "rep")])
    assert code == 0
    report = (tmp_path / "rep" / "check_report.csv").read_text()
    assert "orthonormality,1" in report


def test_check_bad_penalties_exit_one(tmp_path, capsys):
    code = main(["check", "--ks-draws", "20000", "--case3-draws", "20000",
                 "--lemma-reps", "2", "--fuzz-cases", "20", "--variance-reps", "50",
                 "--pens", "0.3,0.1,0.2"])
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "argument error" in out


def test_console_entry_point(tmp_path):
    result = subprocess.run([sys.executable, "-m", "adaseries", "simulate",
                             "--model", "density", "--target", "f2", "--case", "1",
                             "--n", "120", "--reps", "1", "--out", str(tmp_path)],
                            capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    assert (tmp_path / "summary.csv").exists()
