"""Command-line client: exit codes, reports, artifact determinism."""

import json

import pytest

from pidkit import cli

from conftest import FIXTURES


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_peak_reports_uk_2012(capsys):
    code, out, err = run(
        capsys, "peak", "--income", FIXTURES / "uk_income_bins.csv", "--year", "2012"
    )
    assert code == 0
    assert err == ""
    body = json.loads(out)
    assert body["command"] == "peak"
    assert body["peak"]["peak_work_exp"] == pytest.approx(32.5, abs=0.5)


def test_missing_file_exits_2(capsys):
    code, out, err = run(capsys, "gini", "--micro", "/no/such/file.csv")
    assert code == 2
    assert out == ""
    assert "file not found" in err


def test_unreachable_level_exits_3(capsys):
    code, out, err = run(
        capsys, "scale", "match-year", "--gdp", FIXTURES / "us_gdp_ted.csv", "--level", "99999999"
    )
    assert code == 3
    assert "99999999" in err.replace(",", "")


def test_malformed_csv_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("year,gdp\n1990,100\n")
    code, out, err = run(capsys, "scale", "match-year", "--gdp", bad, "--level", "1")
    assert code == 2
    assert "header" in err


def test_scale_predict_round_trip(capsys):
    code, out, _ = run(
        capsys, "scale", "predict", "--t1", "32", "--g1", "15404", "--g2", "20526"
    )
    assert code == 0
    body = json.loads(out)
    assert body["prediction"]["predicted_work_exp"] == pytest.approx(36.9, abs=0.05)


def test_validate_reports_problems_without_failing(tmp_path, capsys):
    dirty = tmp_path / "dirty.csv"
    dirty.write_text("country,year,gdp_pc\nUSA,2000,100\nUSA,2000,-5\n")
    code, out, _ = run(capsys, "validate", "--gdp", dirty)
    assert code == 0
    body = json.loads(out)
    assert body["clean"] is False
    assert body["files"][str(dirty)]["problems"]


def test_tail_report_names_peak_bin(capsys):
    code, out, _ = run(
        capsys, "tail",
        "--dist", FIXTURES / "canada_distribution.csv",
        "--year", "2013", "--threshold", "150000",
    )
    assert code == 0
    body = json.loads(out)
    assert body["profile"]["peak_bin"] == [45, 54]
    assert body["profile"]["threshold"] == 150000.0


def test_calibrate_hits_edge(capsys):
    code, out, _ = run(
        capsys, "calibrate",
        "--dist", FIXTURES / "canada_distribution.csv",
        "--year", "2013", "--portion", "0.027",
    )
    assert code == 0
    assert json.loads(out)["calibration"]["threshold"] == 150000.0


def test_simulate_writes_curve_artifact(tmp_path, capsys):
    out_dir = tmp_path / "sim"
    code, out, _ = run(
        capsys, "simulate", "--g", "20000", "--t-end", "55", "--out", out_dir
    )
    assert code == 0
    body = json.loads(out)
    assert body["critical_work_exp"] == pytest.approx(30.0)
    assert body["artifacts"] == ["report.json", "simulated_g_20000.csv"]
    assert (out_dir / "report.json").is_file()
    report = json.loads((out_dir / "report.json").read_text())
    assert report["gdp_pc"] == 20000.0


def test_match_against_curve_library(capsys):
    code, out, _ = run(
        capsys, "match",
        "--curve", FIXTURES / "us_curves" / "us_1992.csv",
        "--library", FIXTURES / "us_curves",
        "--target-year", "2012",
    )
    assert code == 0
    body = json.loads(out)
    assert body["match"]["best_year"] == 1992
    assert body["match"]["misfit"] == 0.0
    assert body["match"]["lag_years"] == 20


def test_reports_are_byte_identical_across_runs(tmp_path, capsys):
    args = [
        "peak", "--income", FIXTURES / "uk_income_bins.csv", "--year", "2012",
    ]
    outputs = []
    artifact_bytes = []
    for run_dir in (tmp_path / "a", tmp_path / "b"):
        code, out, _ = run(capsys, *args, "--out", run_dir)
        assert code == 0
        outputs.append(out)
        artifact_bytes.append(
            sorted((p.name, p.read_bytes()) for p in run_dir.iterdir())
        )
    assert outputs[0] == outputs[1]
    assert artifact_bytes[0] == artifact_bytes[1]


def test_report_keys_are_sorted(capsys):
    _, out, _ = run(
        capsys, "scale", "predict", "--t1", "28.5", "--g1", "20207", "--g2", "23017"
    )
    body = json.loads(out)
    assert list(body) == sorted(body)
    assert list(body["prediction"]) == sorted(body["prediction"])


def test_curve_requires_exactly_one_input(capsys):
    code, _, err = run(capsys, "curve")
    assert code == 2
    assert "exactly one" in err
