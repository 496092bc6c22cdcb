import csv
import io
import json
import math
import subprocess
import sys

import pytest

from sumsetlab.cli import run_command


@pytest.fixture
def set_file(tmp_path):
    path = tmp_path / "set.txt"
    path.write_text("n=10\n1\n2\n4\n")
    return path


def run(argv, capsys):
    code = run_command(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_theory_command(capsys):
    code, out, _ = run(["theory", "--n", "1048576", "--alpha", "0.5", "--g", "2", "--A", "0"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["p"] == pytest.approx(math.sqrt(4 * math.log(2**20) / 2**20), rel=1e-14)
    assert data["p"] == pytest.approx(7.2721e-3, abs=1e-7)
    assert data["limit_prob"] == pytest.approx(0.367879, abs=1e-6)
    assert data["window"] == [2**19, 3 * 2**19]
    assert data["lambda_exact"] > 0 and data["sc_bound"] > 0


def test_theory_h3(capsys):
    code, out, _ = run(["theory", "--n", "10000", "--alpha", "0.2", "--h", "3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["p"] == pytest.approx(2.758e-2, abs=1e-5)
    assert "lambda_exact" not in data


def test_theory_errors(capsys):
    code, _, err = run(["theory", "--n", "100", "--alpha", "1.5"], capsys)
    assert code == 1 and "alpha" in err
    code, _, err = run(["theory", "--n", "100", "--h", "3", "--g", "2"], capsys)
    assert code == 2
    code, _, err = run(["theory", "--n", "10", "--g", "2", "--A", "-100"], capsys)
    assert code == 1 and "radicand" in err
    code, _, err = run(["theory"], capsys)
    assert code == 2 and "--n" in err


def test_check_command(set_file, capsys):
    code, out, _ = run(["check", "--in", str(set_file), "--h", "2", "--g", "1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["sidon"] is True and data["bhg"] is True
    assert data["truncated_basis"] is False
    assert data["max_sigma"] == 2 and data["max_delta"] == 1


def test_count_command(set_file, tmp_path, capsys):
    code, out, _ = run(["count", "--in", str(set_file), "--sparse"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(int(r["j"]), int(r["count"])) for r in rows] == [(2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (8, 1)]
    code, out, _ = run(["count", "--in", str(set_file)], capsys)
    assert len(out.splitlines()) == 1 + 21
    dest = tmp_path / "c.jsonl"
    assert run_command(["count", "--in", str(set_file), "--sparse", "--format", "jsonl",
                        "--engine", "naive", "--out", str(dest)]) == 0
    assert [json.loads(x)["count"] for x in dest.read_text().splitlines()] == [1] * 6


def test_simulate_basis_trials_zero_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "basis", "spec": {"n": 1000, "alpha": 0.5, "g": 2}, "trials": 0}))
    code, _, err = run(["simulate-basis", "--config", str(cfg)], capsys)
    assert code == 2 and "trials" in err


def test_unknown_subcommand_and_flag(capsys):
    assert run_command(["frobnicate"]) == 2
    assert run_command(["theory", "--n", "10", "--bogus"]) == 2
    capsys.readouterr()


def test_simulate_basis_formats_agree(tmp_path, capsys):
    base = ["simulate-basis", "--n", "4096", "--alpha", "0.5", "--g", "2", "--trials", "12", "--seed", "5"]
    j, c = tmp_path / "r.jsonl", tmp_path / "r.csv"
    assert run_command(base + ["--format", "jsonl", "--out", str(j)]) == 0
    assert run_command(base + ["--format", "csv", "--out", str(c)]) == 0
    jrows = [json.loads(x) for x in j.read_text().splitlines()]
    crows = list(csv.DictReader(io.StringIO(c.read_text())))
    for jr, cr in zip(jrows, crows, strict=True):
        assert {k: str(v).lower() for k, v in jr.items()} == cr
    # byte-reproducible
    j2 = tmp_path / "r2.jsonl"
    assert run_command(base + ["--out", str(j2), "--workers", "3"]) == 0
    assert j.read_bytes() == j2.read_bytes()


def test_simulate_basis_config_and_summary(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "basis", "spec": {"n": 2048, "alpha": 0.5, "g": 2, "A": 1.0},
                               "trials": 20, "master_seed": 3}))
    summary = tmp_path / "s.csv"
    code, out, _ = run(["simulate-basis", "--config", str(cfg), "--format", "json",
                        "--summary", str(summary)], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["estimate"]["trials"] == 20
    row = next(csv.DictReader(io.StringIO(summary.read_text())))
    assert list(row) == ["A", "n", "alpha", "g", "p", "trials", "successes", "p_hat", "ci_lo", "ci_hi",
                         "mean_X", "lambda_exact", "lambda_paper", "lambda_asymptotic", "limit_prob",
                         "sc_bound"]
    assert int(row["successes"]) == data["estimate"]["successes"]
    code, _, _ = run(["simulate-bhg", "--config", str(cfg)], capsys)
    assert code == 2  # kind mismatch


def test_simulate_bhg(capsys):
    code, out, _ = run(["simulate-bhg", "--n", "100000", "--trials", "20", "--k-scale", "0.1",
                        "--engine", "naive", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["estimate"]["p_hat"] >= 0.8


def test_sweep_command(tmp_path, capsys):
    prefix = str(tmp_path / "plot")
    records = tmp_path / "recs.jsonl"
    code, out, _ = run(["sweep", "--n", "4096", "--g", "2", "--trials", "30", "--A-grid=-4,0,4",
                        "--plot", prefix, "--records", str(records)], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["A"]) for r in rows] == [-4.0, 0.0, 4.0]
    assert (tmp_path / "plot.dat").read_text().count("\n") == 4
    assert "plot 'plot.dat'" in (tmp_path / "plot.gp").read_text()
    assert len(records.read_text().splitlines()) == 90
    code, _, err = run(["sweep", "--n", "4096", "--A-grid=1,0"], capsys)
    assert code == 2
    code, _, err = run(["sweep", "--n", "4096"], capsys)
    assert code == 2


def test_balls_boxes_command(capsys):
    code, out, _ = run(["balls-boxes", "--boxes", "100", "--g", "2", "--trials", "4", "--mode", "waiting"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["trial", "seed", "value"] and len(rows) == 4
    code, out, _ = run(["balls-boxes", "--boxes", "100", "--balls", "0", "--trials", "2"], capsys)
    assert [r.split(",")[2] for r in out.splitlines()[1:]] == ["0", "0"]


def test_module_entry_point(set_file):
    res = subprocess.run([sys.executable, "-m", "sumsetlab", "check", "--in", str(set_file)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["sidon"] is True
