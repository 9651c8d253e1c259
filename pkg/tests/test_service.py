"""HTTP surface: status codes, error envelopes, round trips."""

import pytest

from conftest import FIXTURES


def post(client, path, payload):
    return client.post(path, json=payload)


def test_health(client):
    body = client.get("/v1/health").json()
    assert body["status"] == "ok"
    assert body["version"]


def test_ingest_gdp_parses_fixture(client):
    text = (FIXTURES / "us_gdp_ted.csv").read_text()
    resp = post(client, "/v1/ingest/gdp", {"text": text})
    assert resp.status_code == 200
    series = resp.json()
    assert series["country"] == "USA"
    assert [1992, 23363.0] in series["points"]


def test_validation_error_envelope(client):
    resp = post(client, "/v1/ingest/gdp", {"text": "year,gdp\n"})
    assert resp.status_code == 422
    err = resp.json()["error"]
    assert err["type"] == "validation"
    assert "header" in err["message"]


def test_domain_error_envelope(client):
    resp = post(client, "/v1/scaling/predict-peak",
                {"base_work_exp": 28.5, "gdp_base": -1.0, "gdp_target": 23017.0})
    assert resp.status_code == 422
    assert resp.json()["error"]["type"] == "domain"


def test_insufficient_data_envelope(client):
    series = {"country": "USA", "points": [[2000, 100.0], [2001, 200.0]]}
    resp = post(client, "/v1/scaling/matching-year", {"level": 500.0, "reference": series})
    assert resp.status_code == 409
    err = resp.json()["error"]
    assert err["type"] == "insufficient_data"
    assert "500" in err["message"]


def test_curve_peak_round_trip(client):
    text = (FIXTURES / "us_curves" / "us_1992.csv").read_text()
    curve = post(client, "/v1/ingest/curve", {"text": text}).json()
    assert curve["normalized"]
    peak = post(client, "/v1/curves/peak", {"curve": curve}).json()
    assert peak["peak_age"] - peak["peak_work_exp"] == pytest.approx(14.0)
    assert 25.0 < peak["peak_work_exp"] < 40.0


def test_curves_pipeline_from_bins(client):
    text = (FIXTURES / "uk_income_bins.csv").read_text()
    tables = post(client, "/v1/ingest/income-bins", {"text": text, "year": 2012}).json()["tables"]
    assert len(tables) == 1
    curve = post(client, "/v1/curves/from-bins", {"table": tables[0]}).json()
    normed = post(client, "/v1/curves/normalize", {"curve": curve}).json()
    assert max(v for _, v in normed["points"]) == 1.0
    peak = post(client, "/v1/curves/peak", {"curve": normed}).json()
    assert peak["peak_work_exp"] == pytest.approx(32.5, abs=0.5)


def test_curves_moving_average_needs_unit_spacing(client):
    text = (FIXTURES / "us_curves" / "us_1985.csv").read_text()
    curve = post(client, "/v1/ingest/curve", {"text": text}).json()
    smooth = post(client, "/v1/curves/moving-average", {"curve": curve, "window": 3})
    assert smooth.status_code == 200

    five_year = {"label": "coarse", "points": [[0.0, 1.0], [5.0, 2.0], [10.0, 3.0]], "normalized": False}
    resp = post(client, "/v1/curves/moving-average", {"curve": five_year, "window": 3})
    assert resp.status_code == 422
    assert resp.json()["error"]["type"] == "domain"


def test_scaling_predict_peak(client):
    resp = post(client, "/v1/scaling/predict-peak",
                {"base_work_exp": 32.0, "gdp_base": 15404.0, "gdp_target": 20526.0})
    body = resp.json()
    assert body["predicted_work_exp"] == pytest.approx(36.9, abs=0.05)


def test_scaling_trend_and_project(client):
    series = {"country": "X", "points": [[2000, 1000.0], [2001, 1100.0], [2002, 1200.0]]}
    trend = post(client, "/v1/scaling/trend", {"series": series}).json()
    assert trend["slope"] == pytest.approx(100.0)
    projected = post(client, "/v1/scaling/project",
                     {"trend": trend, "anchor_year": 2002, "anchor_level": 1200.0,
                      "target_level": 1500.0}).json()
    assert projected["year"] == pytest.approx(2005.0)


def test_scaling_ratio_points(client):
    num = {"country": "X", "points": [[2000, 150.0], [2001, 300.0]]}
    den = {"country": "Y", "points": [[2000, 100.0], [2001, 200.0]]}
    body = post(client, "/v1/scaling/ratio", {"numerator": num, "denominator": den}).json()
    assert body["points"] == [[2000, 1.5], [2001, 1.5]]


def test_inequality_gini_endpoint(client):
    data = {"country": "X", "year": 2000, "records": [[20, 0.0, 1.0], [30, 7.0, 1.0]]}
    body = post(client, "/v1/inequality/gini", {"data": data}).json()
    assert body["gini"] == pytest.approx(0.5)


def test_inequality_profile_and_normalize(client):
    text = (FIXTURES / "canada_distribution.csv").read_text()
    tables = post(client, "/v1/ingest/distribution", {"text": text, "year": 2013}).json()["tables"]
    profile = post(client, "/v1/inequality/tail-profile",
                   {"table": tables[0], "threshold": 150000.0}).json()
    assert profile["threshold"] == 150000.0
    assert profile["total_portion"] == pytest.approx(0.027, abs=0.002)
    normed = post(client, "/v1/inequality/normalize-profile", {"profile": profile}).json()
    assert max(b["portion"] for b in normed["per_bin"]) == 1.0
    calibrated = post(client, "/v1/inequality/calibrate",
                      {"table": tables[0], "target_portion": 0.027}).json()
    assert calibrated["threshold"] == 150000.0


def test_model_simulate_keys(client):
    body = post(client, "/v1/model/simulate", {"g": 20000.0}).json()
    assert set(body) == {"gdp_pc", "critical_work_exp", "work_capital", "curve"}
    assert body["critical_work_exp"] == pytest.approx(30.0)
    values = [v for _, v in body["curve"]["points"]]
    assert max(values) == values[[t for t, _ in body["curve"]["points"]].index(30.0)]


def test_model_pareto_sample_reproducible(client):
    payload = {"k": 3.0, "x_m": 1000.0, "n": 5, "seed": 42}
    a = post(client, "/v1/model/pareto-sample", payload).json()
    b = post(client, "/v1/model/pareto-sample", payload).json()
    assert a == b
    assert a["country"] == "synthetic"
    assert len(a["records"]) == 5


def test_match_curve_endpoint(client, curve_library):
    text = (FIXTURES / "us_curves" / "us_1992.csv").read_text()
    target = post(client, "/v1/ingest/curve", {"text": text, "label": "probe"}).json()
    library = []
    for year in (1985, 1992, 1996):
        year_text = (FIXTURES / "us_curves" / f"us_{year}.csv").read_text()
        entry = post(client, "/v1/ingest/curve", {"text": year_text}).json()
        library.append({"year": year, "curve": entry})
    body = post(client, "/v1/match/curve", {"target": target, "library": library}).json()
    assert body["best_year"] == 1992
    assert body["misfit"] == 0.0
    report = post(client, "/v1/match/report",
                  {"results": [body], "corrections": {"probe": 1.1}}).json()
    assert report["matches"][0]["correction_factor"] == 1.1


def test_ingest_diagnostics_endpoint(client):
    text = "country,year,gdp_pc\nUSA,2000,100\nUSA,2000,200\n"
    body = post(client, "/v1/ingest/diagnostics", {"kind": "gdp", "text": text}).json()
    assert body["problems"]
    assert any("duplicate" in p for p in body["problems"])


def test_corrected_gdp_endpoint(client):
    gdp = {"country": "USA", "points": [[2000, 100.0], [2001, 110.0]]}
    pop = {"country": "USA", "points": [[2000, 10.0, 5.0], [2001, 10.0, 5.0]]}
    body = post(client, "/v1/ingest/corrected-gdp", {"gdp": gdp, "population": pop}).json()
    assert body["points"] == [[2000, 200.0], [2001, 220.0]]
