import json

import numpy as np
import pytest

from msifield import fixtures as fx
from msifield.cli import main
from msifield.io import read_csv_matrix, save_model, write_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_estimate_with_given_breakpoints(capsys):
    code, out, _ = run(
        capsys, "estimate",
        "--series", str(fx.fixture_path("table1.csv")),
        "--breakpoints", "0,14,31,52", "--lambda-out", "--digits", "3",
    )
    assert code == 0
    assert "breakpoints: 0.000,14.000,31.000,52.000" in out
    assert "lambda: 1.214,1.235" in out


def test_estimate_detects_on_modeled_prefix(capsys):
    code, out, _ = run(
        capsys, "estimate",
        "--series", str(fx.fixture_path("table1.csv")),
        "--segments", "3", "--limit", "52", "--lambda-out", "--digits", "3",
    )
    assert code == 0
    assert "breakpoints: 0.000,14.000,31.000,52.000" in out
    assert "lambda: 1.214,1.235" in out


def test_estimate_hurst_prime(capsys):
    code, out, _ = run(
        capsys, "estimate",
        "--series", str(fx.fixture_path("table2.csv")),
        "--breakpoints", "0,10,23,40", "--hurst-prime", "--digits", "2",
    )
    assert code == 0
    assert "hurst_prime: 0.90,1.14,0.84" in out


def test_predict_report(capsys, tmp_path, case_study_model):
    model_path = tmp_path / "model.json"
    save_model(case_study_model, model_path)
    report_path = tmp_path / "report.json"
    code, out, _ = run(
        capsys, "predict",
        "--model", str(model_path),
        "--rects", str(fx.fixture_path("table10.csv")),
        "--initial", "1,1", "--report", str(report_path), "--digits", "1",
    )
    assert code == 0
    assert "mape: 10.5" in out
    assert "lewis: good" in out
    doc = json.loads(report_path.read_text())
    assert doc["lewis"] == "good"
    assert abs(doc["mape"] - 10.5) <= 0.1
    assert abs(doc["predicted"]["2,1"] - 38168) <= 40


def test_evaluate_command(capsys, tmp_path):
    a = tmp_path / "actual.csv"
    p = tmp_path / "predicted.csv"
    write_matrix(a, np.array([[100.0, 200.0]]), digits=1)
    write_matrix(p, np.array([[90.0, 200.0]]), digits=1)
    code, out, _ = run(capsys, "evaluate", "--actual", str(a), "--predicted", str(p),
                       "--digits", "2")
    assert code == 0
    assert "mape: 5.00" in out
    assert "lewis: highly_accurate" in out
    code, out, _ = run(capsys, "evaluate", "--actual", str(a), "--predicted", str(p),
                       "--exclude", "1,2", "--digits", "2")
    assert "mape: 10.00" in out


def test_simulate_reproducible(capsys, tmp_path, brownian_model):
    model_path = tmp_path / "brownian.json"
    save_model(brownian_model, model_path)
    out1 = tmp_path / "s1.csv"
    out2 = tmp_path / "s2.csv"
    for out_path in (out1, out2):
        code, _, _ = run(
            capsys, "simulate", "--model", str(model_path), "--grid", "8x8",
            "--seed", "42", "--out", str(out_path),
        )
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    sample = read_csv_matrix(out1)
    assert sample.shape == (8, 8)
    # a different seed changes the sample
    out3 = tmp_path / "s3.csv"
    run(capsys, "simulate", "--model", str(model_path), "--grid", "8x8",
        "--seed", "43", "--out", str(out3))
    assert out1.read_bytes() != out3.read_bytes()


def test_simulate_fbs_kernel(capsys, tmp_path, brownian_model):
    model_path = tmp_path / "brownian.json"
    save_model(brownian_model, model_path)
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "simulate", "--model", str(model_path), "--kernel", "fbs",
                     "--grid", "4x5", "--seed", "7", "--out", str(out))
    assert code == 0
    assert read_csv_matrix(out).shape == (4, 5)


def test_simulate_rejects_non_simulatable_model(capsys, tmp_path, case_study_model):
    model_path = tmp_path / "model.json"
    save_model(case_study_model, model_path)
    code, _, err = run(capsys, "simulate", "--model", str(model_path),
                       "--grid", "4x4", "--seed", "1",
                       "--out", str(tmp_path / "s.csv"))
    assert code == 1
    assert "error" in err


def test_spectrum_command(capsys, tmp_path):
    rows = []
    rng = np.random.default_rng(5)
    lags = [(0, 0), (1, 0), (0, 1)]
    for n1 in range(2):
        for n2 in range(2):
            for t1, t2 in lags:
                rows.append([n1, n2, t1, t2, rng.normal()])
    cov_path = tmp_path / "q.csv"
    write_matrix(cov_path, np.asarray(rows), digits=8)
    prefix = str(tmp_path / "spec")
    code, out, _ = run(
        capsys, "spectrum", "--cov", str(cov_path), "--period", "2,2",
        "--alpha", "2,2", "--hurst", "0.5,0.5", "--resolution", "8",
        "--out-prefix", prefix,
    )
    assert code == 0
    r = read_csv_matrix(f"{prefix}_r.csv")
    assert r.shape == (2 * 2 * len(lags), 6)
    dens = read_csv_matrix(f"{prefix}_density.csv")
    assert dens.shape == (2 * 2 * 8 * 8, 6)
    assert (tmp_path / "spec_rh.csv").exists()
    assert (tmp_path / "spec_density_h.csv").exists()


def test_fixtures_command(capsys):
    code, out, _ = run(capsys, "fixtures", "--validate")
    assert code == 0
    assert "all fixtures valid" in out
    assert "table10.csv" in out


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["estimate"])  # missing required --series
    assert exc.value.code == 2


def test_computation_error_exits_1(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    code, _, err = run(capsys, "estimate", "--series", str(bad))
    assert code == 1
    assert "error" in err
