"""Command-line client for the analysis service.

Every subcommand reads local files, sends their content to the service
layer (hosted in-process, no sockets), and renders the JSON response as
a deterministic report: sorted keys, floats at six significant digits.
With --out the report and any per-figure CSV files are also written to
a directory, all-or-nothing.

Exit codes: 0 success, 2 invalid input or arguments, 3 valid input
that does not cover the requested computation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import curves, inequality, ingest, report
from .service import create_app

DEFAULT_WINDOW = 9
DEFAULT_GRID = 0.1

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INSUFFICIENT = 3


class CliFailure(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class ServiceClient:
    """In-process HTTP client against the service app."""

    def __init__(self):
        import warnings

        with warnings.catch_warnings():
            # some starlette builds warn about their own httpx shim on import
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient

        self._client = TestClient(create_app(), raise_server_exceptions=False)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code < 400:
            return resp.json()
        body = resp.json()
        if "error" in body:
            message = body["error"]["message"]
        else:
            message = json.dumps(body.get("detail", body))
        code = EXIT_INSUFFICIENT if resp.status_code == 409 else EXIT_INVALID
        raise CliFailure(message, code)


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise CliFailure(f"file not found: {path}", EXIT_INVALID)
    return p.read_text()


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", label).strip("_") or "output"


def _rounded_curve(payload: dict) -> curves.MeanIncomeCurve:
    return curves.MeanIncomeCurve(
        label=payload["label"],
        points=tuple((report.round_sig(x), report.round_sig(v)) for x, v in payload["points"]),
        normalized=payload["normalized"],
        illustrative=tuple(payload.get("illustrative", ())),
    )


def _rounded_profile(payload: dict) -> inequality.TailProfile:
    return inequality.TailProfile(
        per_bin=tuple(
            (b["age_lo"], b["age_hi"], report.round_sig(b["portion"]))
            for b in payload["per_bin"]
        ),
        total_portion=payload.get("total_portion"),
        threshold=payload.get("threshold"),
        label=payload.get("label", ""),
        normalized=payload.get("normalized", False),
        flagged=tuple(payload.get("flagged", ())),
    )


def _emit(result: dict, artifacts: dict[str, str], out: str | None) -> None:
    payload = dict(result)
    if out is not None:
        out_dir = Path(out)
        files = dict(artifacts)
        files["report.json"] = report.dumps_report(result)
        report.write_artifacts(out_dir, files)
        payload = dict(result)
        # names, not paths: keeps the report independent of --out location
        payload["artifacts"] = sorted(files)
    sys.stdout.write(report.dumps_report(payload))


# ---------------------------------------------------------------------------
# input pipelines shared by subcommands


def _curve_payload(client: ServiceClient, args) -> dict:
    """Build a curve from whichever input flag the user gave."""
    sources = [s for s in (args.income, getattr(args, "micro", None), getattr(args, "curve", None)) if s]
    if len(sources) != 1:
        raise CliFailure("provide exactly one of --income, --micro or --curve", EXIT_INVALID)
    if args.income:
        tables = client.post(
            "/v1/ingest/income-bins",
            {"text": _read_text(args.income), "country": args.country, "year": args.year},
        )["tables"]
        if len(tables) != 1:
            found = ", ".join(f"{t['country']} {t['year']}" for t in tables)
            raise CliFailure(
                f"input holds several tables ({found}); narrow with --country/--year",
                EXIT_INVALID,
            )
        return client.post("/v1/curves/from-bins", {"table": tables[0]})
    if getattr(args, "micro", None):
        data = client.post(
            "/v1/ingest/microdata",
            {"text": _read_text(args.micro), "country": args.country, "year": args.year},
        )
        curve = client.post("/v1/curves/from-microdata", {"data": data})
        window = getattr(args, "window", DEFAULT_WINDOW)
        if window > 1:
            curve = client.post("/v1/curves/moving-average", {"curve": curve, "window": window})
        return curve
    label = Path(args.curve).stem
    return client.post("/v1/ingest/curve", {"text": _read_text(args.curve), "label": label})


def _load_gdp(client: ServiceClient, path: str, country: str | None) -> dict:
    return client.post("/v1/ingest/gdp", {"text": _read_text(path), "country": country})


def _load_library(client: ServiceClient, directory: str, endpoint: str, key: str) -> list[dict]:
    lib_dir = Path(directory)
    if not lib_dir.is_dir():
        raise CliFailure(f"library directory not found: {directory}", EXIT_INVALID)
    entries = []
    for path in sorted(lib_dir.glob("*.csv")):
        match = re.findall(r"(\d{4})", path.stem)
        if not match:
            raise CliFailure(
                f"library file {path.name} has no 4-digit year in its name", EXIT_INVALID
            )
        payload = client.post(endpoint, {"text": path.read_text(), "label": path.stem})
        entries.append({"year": int(match[-1]), key: payload})
    if not entries:
        raise CliFailure(f"library directory {directory} holds no CSV files", EXIT_INVALID)
    return entries


# ---------------------------------------------------------------------------
# subcommands


def cmd_ingest(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    result: dict = {"command": "ingest"}
    artifacts: dict[str, str] = {}
    if not any((args.gdp, args.pop, args.income, args.micro, args.dist)):
        raise CliFailure("nothing to ingest: pass --gdp, --pop, --income, --micro or --dist", EXIT_INVALID)
    gdp_payload = None
    pop_payload = None
    if args.gdp:
        gdp_payload = _load_gdp(client, args.gdp, args.country)
        series = ingest.GdpSeries(gdp_payload["country"], tuple(tuple(p) for p in gdp_payload["points"]))
        artifacts["gdp.csv"] = ingest.gdp_csv_text(series)
        result["gdp"] = {
            "country": series.country,
            "years": [series.points[0][0], series.points[-1][0]],
            "rows": len(series.points),
        }
    if args.pop:
        pop_payload = client.post(
            "/v1/ingest/population", {"text": _read_text(args.pop), "country": args.country}
        )
        series = ingest.PopulationSeries(
            pop_payload["country"], tuple(tuple(p) for p in pop_payload["points"])
        )
        artifacts["population.csv"] = ingest.population_csv_text(series)
        result["population"] = {
            "country": series.country,
            "years": [series.points[0][0], series.points[-1][0]],
            "rows": len(series.points),
        }
    if gdp_payload and pop_payload:
        corrected = client.post(
            "/v1/ingest/corrected-gdp", {"gdp": gdp_payload, "population": pop_payload}
        )
        series = ingest.GdpSeries(
            corrected["country"],
            tuple((y, report.round_sig(g)) for y, g in corrected["points"]),
        )
        artifacts["gdp_working_age.csv"] = ingest.gdp_csv_text(series)
        result["gdp_working_age"] = {"rows": len(series.points)}
    if args.income:
        tables = client.post(
            "/v1/ingest/income-bins",
            {"text": _read_text(args.income), "country": args.country, "year": args.year},
        )["tables"]
        core_tables = [
            ingest.BinnedIncomeTable(
                t["country"],
                t["year"],
                t["currency"],
                tuple(
                    ingest.AgeBin(b["age_lo"], b["age_hi"], b["persons"], b["mean_income"])
                    for b in t["bins"]
                ),
            )
            for t in tables
        ]
        artifacts["income_bins.csv"] = ingest.binned_csv_text(core_tables)
        result["income_bins"] = {
            "tables": [[t.country, t.year] for t in core_tables],
        }
    if args.micro:
        data = client.post(
            "/v1/ingest/microdata",
            {"text": _read_text(args.micro), "country": args.country, "year": args.year},
        )
        core = ingest.MicrodataSet(data["country"], data["year"], tuple(tuple(r) for r in data["records"]))
        artifacts["microdata.csv"] = ingest.microdata_csv_text(core)
        result["microdata"] = {"country": core.country, "year": core.year, "rows": len(core)}
    if args.dist:
        tables = client.post(
            "/v1/ingest/distribution",
            {"text": _read_text(args.dist), "country": args.country, "year": args.year},
        )["tables"]
        texts = []
        for t in tables:
            core = ingest.IncomeDistributionTable(
                t["country"],
                t["year"],
                t["currency"],
                tuple(
                    ingest.DistBin(
                        c["age_lo"], c["age_hi"], c["income_lo"], c["income_hi"], c["persons"]
                    )
                    for c in t["cells"]
                ),
            )
            texts.append(ingest.distribution_csv_text(core))
        header = texts[0].splitlines()[0]
        body = [line for text in texts for line in text.splitlines()[1:]]
        artifacts["distribution.csv"] = "\n".join([header] + body) + "\n"
        result["distribution"] = {"tables": [[t["country"], t["year"]] for t in tables]}
    return result, artifacts


def cmd_validate(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    checks = [
        ("gdp", args.gdp),
        ("population", args.pop),
        ("income_bins", args.income),
        ("microdata", args.micro),
        ("distribution", args.dist),
    ]
    checks = [(kind, path) for kind, path in checks if path]
    if not checks:
        raise CliFailure("nothing to validate: pass --gdp, --pop, --income, --micro or --dist", EXIT_INVALID)
    files = {}
    clean = True
    for kind, path in checks:
        problems = client.post("/v1/ingest/diagnostics", {"kind": kind, "text": _read_text(path)})[
            "problems"
        ]
        files[path] = {"kind": kind, "problems": problems}
        clean = clean and not problems
    return {"command": "validate", "clean": clean, "files": files}, {}


def cmd_curve(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    curve = _curve_payload(client, args)
    if args.normalize:
        curve = client.post("/v1/curves/normalize", {"curve": curve})
    core = _rounded_curve(curve)
    artifacts = {f"{_slug(core.label)}.csv": curves.curve_csv_text(core)}
    result = {
        "command": "curve",
        "label": core.label,
        "points": len(core.points),
        "normalized": core.normalized,
        "work_exp_range": [core.points[0][0], core.points[-1][0]],
    }
    return result, artifacts


def cmd_peak(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    curve = _curve_payload(client, args)
    peak = client.post("/v1/curves/peak", {"curve": curve, "grid_step": args.grid})
    dense = client.post("/v1/curves/spline", {"curve": curve, "grid_step": args.grid})
    core_dense = _rounded_curve(dense)
    artifacts = {f"{_slug(core_dense.label)}_spline.csv": curves.curve_csv_text(core_dense)}
    return {"command": "peak", "label": curve["label"], "peak": peak}, artifacts


def cmd_scale_predict(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    prediction = client.post(
        "/v1/scaling/predict-peak",
        {"base_work_exp": args.t1, "gdp_base": args.g1, "gdp_target": args.g2},
    )
    return {"command": "scale predict", "prediction": prediction}, {}


def cmd_scale_match_year(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    reference = _load_gdp(client, args.gdp, args.country)
    match = client.post("/v1/scaling/matching-year", {"level": args.level, "reference": reference})
    return {"command": "scale match-year", "level": args.level, "match": match}, {}


def cmd_scale_trend(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    series = _load_gdp(client, args.gdp, args.country)
    trend = client.post(
        "/v1/scaling/trend",
        {"series": series, "year_from": args.year_from, "year_to": args.year_to},
    )
    return {"command": "scale trend", "country": series["country"], "trend": trend}, {}


def cmd_scale_project(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    series = _load_gdp(client, args.gdp, args.country)
    trend = client.post(
        "/v1/scaling/trend",
        {"series": series, "year_from": args.year_from, "year_to": args.year_to},
    )
    anchor_year = args.anchor_year
    anchor_level = args.anchor_level
    if anchor_year is None:
        anchor_year, anchor_level = series["points"][-1]
    elif anchor_level is None:
        levels = {y: g for y, g in series["points"]}
        if anchor_year not in levels:
            raise CliFailure(f"series has no year {anchor_year}; pass --anchor-level", EXIT_INVALID)
        anchor_level = levels[anchor_year]
    projected = client.post(
        "/v1/scaling/project",
        {
            "trend": trend,
            "anchor_year": anchor_year,
            "anchor_level": anchor_level,
            "target_level": args.target,
        },
    )
    result = {
        "command": "scale project",
        "trend": trend,
        "anchor": {"year": anchor_year, "level": anchor_level},
        "target_level": args.target,
        "attainment_year": projected["year"],
    }
    return result, {}


def cmd_scale_ratio(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    numerator = _load_gdp(client, args.gdp_a, args.country_a)
    denominator = _load_gdp(client, args.gdp_b, args.country_b)
    ratio = client.post("/v1/scaling/ratio", {"numerator": numerator, "denominator": denominator})
    points = ratio["points"]
    lines = ["year,ratio"] + [f"{y},{report.format_cell(r)}" for y, r in points]
    artifacts = {"series_ratio.csv": "\n".join(lines) + "\n"}
    result = {
        "command": "scale ratio",
        "ratio_first": {"year": points[0][0], "value": points[0][1]},
        "ratio_last": {"year": points[-1][0], "value": points[-1][1]},
        "years": len(points),
    }
    return result, artifacts


def cmd_gini(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    data = client.post(
        "/v1/ingest/microdata",
        {"text": _read_text(args.micro), "country": args.country, "year": args.year},
    )
    value = client.post("/v1/inequality/gini", {"data": data})["gini"]
    return {
        "command": "gini",
        "country": data["country"],
        "year": data["year"],
        "records": len(data["records"]),
        "gini": value,
    }, {}


def _load_distribution(client: ServiceClient, args) -> dict:
    tables = client.post(
        "/v1/ingest/distribution",
        {"text": _read_text(args.dist), "country": args.country, "year": args.year},
    )["tables"]
    if len(tables) != 1:
        found = ", ".join(f"{t['country']} {t['year']}" for t in tables)
        raise CliFailure(
            f"input holds several tables ({found}); narrow with --country/--year", EXIT_INVALID
        )
    return tables[0]


def cmd_tail(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    if args.dist:
        if args.threshold is None:
            raise CliFailure("--threshold is required with --dist", EXIT_INVALID)
        table = _load_distribution(client, args)
        profile = client.post(
            "/v1/inequality/tail-profile", {"table": table, "threshold": args.threshold}
        )
    elif args.above and args.population:
        if args.threshold is None:
            raise CliFailure("--threshold is required", EXIT_INVALID)
        above = client.post(
            "/v1/ingest/income-bins",
            {"text": _read_text(args.above), "country": args.country, "year": args.year},
        )["tables"]
        pop = client.post(
            "/v1/ingest/income-bins",
            {"text": _read_text(args.population), "country": args.country, "year": args.year},
        )["tables"]
        if len(above) != 1 or len(pop) != 1:
            raise CliFailure("count and population files must hold one table each", EXIT_INVALID)
        profile = client.post(
            "/v1/inequality/tail-by-age",
            {"above": above[0], "population": pop[0], "threshold": args.threshold},
        )
    else:
        raise CliFailure("pass --dist or both --above and --population", EXIT_INVALID)
    if args.normalize:
        profile = client.post("/v1/inequality/normalize-profile", {"profile": profile})
    core = _rounded_profile(profile)
    artifacts = {f"{_slug(core.label)}_tail.csv": inequality.profile_csv_text(core)}
    result = {
        "command": "tail",
        "profile": {
            "label": core.label,
            "threshold": core.threshold,
            "total_portion": core.total_portion,
            "normalized": core.normalized,
            "peak_bin": list(core.argmax_bin()),
            "per_bin": [
                {"age_lo": lo, "age_hi": hi, "portion": p} for lo, hi, p in core.per_bin
            ],
        },
    }
    return result, artifacts


def cmd_calibrate(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    table = _load_distribution(client, args)
    calibration = client.post(
        "/v1/inequality/calibrate",
        {"table": table, "target_portion": args.portion, "max_gap": args.max_gap},
    )
    return {"command": "calibrate", "calibration": calibration}, {}


def cmd_simulate(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    params: dict = {}
    if args.params:
        try:
            params = json.loads(_read_text(args.params))
        except json.JSONDecodeError as exc:
            raise CliFailure(f"bad params file {args.params}: {exc}", EXIT_INVALID)
    for key in ("lambda_ref", "g_ref", "tc_ref", "beta", "dt"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    body = {"g": args.g, "step": args.step}
    if params:
        body["params"] = params
    if args.t_end is not None:
        body["t_end"] = args.t_end
    simulated = client.post("/v1/model/simulate", body)
    core = _rounded_curve(simulated["curve"])
    artifacts = {f"{_slug(core.label)}.csv": curves.curve_csv_text(core)}
    result = {
        "command": "simulate",
        "gdp_pc": simulated["gdp_pc"],
        "critical_work_exp": simulated["critical_work_exp"],
        "work_capital": simulated["work_capital"],
        "params": params or None,
        "points": len(core.points),
    }
    if args.pareto_n:
        sample = client.post(
            "/v1/model/pareto-sample",
            {"k": args.pareto_k, "x_m": args.pareto_xm, "n": args.pareto_n, "seed": args.seed},
        )
        incomes = [income for _, income, _ in sample["records"]]
        lines = ["income"] + [report.format_cell(v) for v in incomes]
        artifacts["pareto_sample.csv"] = "\n".join(lines) + "\n"
        result["pareto"] = {
            "k": args.pareto_k,
            "x_m": args.pareto_xm,
            "n": args.pareto_n,
            "seed": args.seed,
            "sample_mean": sum(incomes) / len(incomes),
        }
    return result, artifacts


def cmd_match(client: ServiceClient, args) -> tuple[dict, dict[str, str]]:
    if args.tail:
        target = client.post(
            "/v1/ingest/profile",
            {"text": _read_text(args.tail), "label": Path(args.tail).stem},
        )
        target = client.post("/v1/inequality/normalize-profile", {"profile": target})
        library = _load_library(client, args.library, "/v1/ingest/profile", "profile")
        library = [
            {
                "year": entry["year"],
                "profile": client.post(
                    "/v1/inequality/normalize-profile", {"profile": entry["profile"]}
                ),
            }
            for entry in library
        ]
        endpoint, key = "/v1/match/profiles", "profile"
    else:
        target = _curve_payload(client, args)
        if not target["normalized"]:
            target = client.post("/v1/curves/normalize", {"curve": target})
        library = _load_library(client, args.library, "/v1/ingest/curve", "curve")
        endpoint, key = "/v1/match/curve", "curve"

    body = {"target": target, "library": library}
    if args.gdp:
        body["reference_gdp"] = _load_gdp(client, args.gdp, None)
    if args.target_gdp is not None:
        body["target_gdp"] = args.target_gdp
    elif args.target_gdp_file and args.target_year is not None:
        series = _load_gdp(client, args.target_gdp_file, None)
        levels = {y: g for y, g in series["points"]}
        if args.target_year not in levels:
            raise CliFailure(
                f"target GDP series has no year {args.target_year}", EXIT_INVALID
            )
        body["target_gdp"] = levels[args.target_year]
    if args.target_year is not None:
        body["target_year"] = args.target_year
    match = client.post(endpoint, body)

    corrections = {}
    for spec_item in args.correction or []:
        if "=" not in spec_item:
            raise CliFailure(f"bad --correction {spec_item!r}: expected LABEL=FACTOR", EXIT_INVALID)
        label, factor = spec_item.rsplit("=", 1)
        try:
            corrections[label] = float(factor)
        except ValueError:
            raise CliFailure(f"bad --correction factor {factor!r}", EXIT_INVALID)
    table = client.post("/v1/match/report", {"results": [match], "corrections": corrections})
    return {"command": "match", "match": match, "report": table}, {}


# ---------------------------------------------------------------------------
# argument parsing


def _add_common_inputs(parser: argparse.ArgumentParser, micro: bool = True, curve: bool = True):
    parser.add_argument("--income", help="binned income table CSV")
    if micro:
        parser.add_argument("--micro", help="income microdata CSV")
    if curve:
        parser.add_argument("--curve", help="curve CSV (work_exp,value,normalized)")
    parser.add_argument("--country", help="country filter for multi-country files")
    parser.add_argument("--year", type=int, help="survey year filter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pidkit", description="Age-resolved income distribution analytics."
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", help="validate inputs and write canonical CSVs")
    p.add_argument("--gdp")
    p.add_argument("--pop")
    p.add_argument("--income")
    p.add_argument("--micro")
    p.add_argument("--dist")
    p.add_argument("--country")
    p.add_argument("--year", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="report schema problems without failing")
    p.add_argument("--gdp")
    p.add_argument("--pop")
    p.add_argument("--income")
    p.add_argument("--micro")
    p.add_argument("--dist")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("curve", help="build a mean-income curve over work experience")
    _add_common_inputs(p, curve=False)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="moving-average window for microdata")
    p.add_argument("--normalize", action="store_true", help="scale the curve peak to 1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("peak", help="estimate where a curve peaks")
    _add_common_inputs(p)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--grid", type=float, default=DEFAULT_GRID)
    p.add_argument("--out")
    p.set_defaults(func=cmd_peak)

    scale = sub.add_parser("scale", help="GDP scaling operations").add_subparsers(
        dest="scale_command", required=True
    )

    p = scale.add_parser("predict", help="rescale a peak by sqrt(g2/g1)")
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--g1", type=float, required=True)
    p.add_argument("--g2", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scale_predict)

    p = scale.add_parser("match-year", help="year a GDP series crossed a level")
    p.add_argument("--gdp", required=True)
    p.add_argument("--country")
    p.add_argument("--level", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scale_match_year)

    p = scale.add_parser("trend", help="least-squares GDP trend")
    p.add_argument("--gdp", required=True)
    p.add_argument("--country")
    p.add_argument("--from", dest="year_from", type=int)
    p.add_argument("--to", dest="year_to", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scale_trend)

    p = scale.add_parser("project", help="year a trend reaches a target level")
    p.add_argument("--gdp", required=True)
    p.add_argument("--country")
    p.add_argument("--from", dest="year_from", type=int)
    p.add_argument("--to", dest="year_to", type=int)
    p.add_argument("--anchor-year", type=int)
    p.add_argument("--anchor-level", type=float)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scale_project)

    p = scale.add_parser("ratio", help="year-by-year ratio of two GDP series")
    p.add_argument("--gdp-a", required=True)
    p.add_argument("--gdp-b", required=True)
    p.add_argument("--country-a")
    p.add_argument("--country-b")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scale_ratio)

    p = sub.add_parser("gini", help="weighted Gini coefficient of microdata")
    p.add_argument("--micro", required=True)
    p.add_argument("--country")
    p.add_argument("--year", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gini)

    p = sub.add_parser("tail", help="portion above an income threshold by age")
    p.add_argument("--dist", help="age x income bracket distribution CSV")
    p.add_argument("--above", help="binned table counting people over the threshold")
    p.add_argument("--population", help="binned table with bracket populations")
    p.add_argument("--threshold", type=float)
    p.add_argument("--country")
    p.add_argument("--year", type=int)
    p.add_argument("--normalize", action="store_true", help="scale the largest portion to 1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("calibrate", help="bracket edge nearest a target tail portion")
    p.add_argument("--dist", required=True)
    p.add_argument("--portion", type=float, required=True)
    p.add_argument("--max-gap", type=float, default=0.005)
    p.add_argument("--country")
    p.add_argument("--year", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("simulate", help="model mean-income curve for a GDP level")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--lambda-ref", dest="lambda_ref", type=float)
    p.add_argument("--g-ref", dest="g_ref", type=float)
    p.add_argument("--tc-ref", dest="tc_ref", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--step", type=float, default=DEFAULT_GRID)
    p.add_argument("--params", help="JSON file with model parameters")
    p.add_argument("--pareto-k", type=float, default=3.0)
    p.add_argument("--pareto-xm", type=float, default=1.0)
    p.add_argument("--pareto-n", type=int, default=0, help="draw a Pareto tail sample of this size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("match", help="match a curve or tail profile against a library")
    _add_common_inputs(p)
    p.add_argument("--tail", help="tail profile CSV to match instead of a curve")
    p.add_argument("--library", required=True, help="directory of reference CSVs named *_YYYY.csv")
    p.add_argument("--gdp", help="reference-country GDP series for context and tie-breaks")
    p.add_argument("--target-gdp", type=float, help="target GDP per capita level")
    p.add_argument("--target-gdp-file", help="target-country GDP series; used with --target-year")
    p.add_argument("--target-year", type=int)
    p.add_argument("--correction", action="append", help="LABEL=FACTOR working-age GDP correction")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--out")
    p.set_defaults(func=cmd_match)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        client = ServiceClient()
        result, artifacts = args.func(client, args)
        _emit(result, artifacts, getattr(args, "out", None))
    except CliFailure as failure:
        sys.stderr.write(f"pidkit: error: {failure}\n")
        return failure.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
