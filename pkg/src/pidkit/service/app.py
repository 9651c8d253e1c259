"""HTTP service exposing the analysis operations.

Every endpoint is a pure function of its JSON body: file access stays
with the clients, which post raw CSV text to the ingest routes and pass
the structured payloads between compute routes. Package errors map to
HTTP statuses: malformed data and bad arguments give 422, computations
that need more data than provided give 409.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .. import __version__, curves, inequality, ingest, matcher, model, scaling
from ..errors import DataValidationError, DomainError, InsufficientDataError
from . import schemas


class TextIn(BaseModel):
    text: str
    country: str | None = None
    year: int | None = None
    label: str | None = None


class DiagnosticsIn(BaseModel):
    kind: str
    text: str


class CorrectedGdpIn(BaseModel):
    gdp: schemas.GdpSeriesModel
    population: schemas.PopulationSeriesModel


class TableIn(BaseModel):
    table: schemas.BinnedTableModel


class TablesIn(BaseModel):
    tables: list[schemas.BinnedTableModel]


class MicrodataIn(BaseModel):
    data: schemas.MicrodataModel


class CurveIn(BaseModel):
    curve: schemas.CurveModel


class SmoothIn(BaseModel):
    curve: schemas.CurveModel
    window: int = 9


class GridIn(BaseModel):
    curve: schemas.CurveModel
    grid_step: float = 0.1


class PredictPeakIn(BaseModel):
    base_work_exp: float
    gdp_base: float
    gdp_target: float


class MatchingYearIn(BaseModel):
    level: float
    reference: schemas.GdpSeriesModel


class TrendIn(BaseModel):
    series: schemas.GdpSeriesModel
    year_from: int | None = None
    year_to: int | None = None


class ProjectIn(BaseModel):
    trend: schemas.TrendModel
    anchor_year: float
    anchor_level: float
    target_level: float


class RatioIn(BaseModel):
    numerator: schemas.GdpSeriesModel
    denominator: schemas.GdpSeriesModel


class TailByAgeIn(BaseModel):
    above: schemas.BinnedTableModel
    population: schemas.BinnedTableModel
    threshold: float


class TailProfileIn(BaseModel):
    table: schemas.DistributionTableModel
    threshold: float


class CalibrateIn(BaseModel):
    table: schemas.DistributionTableModel
    target_portion: float
    max_gap: float = 0.005


class ProfileIn(BaseModel):
    profile: schemas.ProfileModel


class SimulateIn(BaseModel):
    g: float
    params: schemas.ParamsModel = Field(default_factory=schemas.ParamsModel)
    t_end: float | None = None
    step: float = 0.1


class IntegrateIn(BaseModel):
    sigma: float
    lam: float
    t_end: float
    dt: float = 0.01


class TailPortionIn(BaseModel):
    g: float
    threshold: float
    t: float
    params: schemas.ParamsModel = Field(default_factory=schemas.ParamsModel)


class ParetoIn(BaseModel):
    k: float
    x_m: float
    n: int
    seed: int = 0


class LibraryCurve(BaseModel):
    year: int
    curve: schemas.CurveModel


class MatchCurveIn(BaseModel):
    target: schemas.CurveModel
    library: list[LibraryCurve]
    reference_gdp: schemas.GdpSeriesModel | None = None
    target_gdp: float | None = None
    target_year: int | None = None
    min_overlap: float = matcher.MIN_OVERLAP_YEARS


class LibraryProfile(BaseModel):
    year: int
    profile: schemas.ProfileModel


class MatchProfilesIn(BaseModel):
    target: schemas.ProfileModel
    library: list[LibraryProfile]
    reference_gdp: schemas.GdpSeriesModel | None = None
    target_gdp: float | None = None
    target_year: int | None = None
    min_overlap: float = matcher.MIN_OVERLAP_YEARS


class MatchReportIn(BaseModel):
    results: list[schemas.MatchResultModel]
    corrections: dict[str, float] = Field(default_factory=dict)


def create_app() -> FastAPI:
    app = FastAPI(title="pidkit", version=__version__)

    @app.exception_handler(DataValidationError)
    async def _validation(request: Request, exc: DataValidationError):
        return JSONResponse(
            status_code=422, content={"error": {"type": "validation", "message": str(exc)}}
        )

    @app.exception_handler(DomainError)
    async def _domain(request: Request, exc: DomainError):
        return JSONResponse(
            status_code=422, content={"error": {"type": "domain", "message": str(exc)}}
        )

    @app.exception_handler(InsufficientDataError)
    async def _insufficient(request: Request, exc: InsufficientDataError):
        return JSONResponse(
            status_code=409, content={"error": {"type": "insufficient_data", "message": str(exc)}}
        )

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "version": __version__}

    # ------------------------------------------------------------------ ingest

    @app.post("/v1/ingest/gdp", response_model=schemas.GdpSeriesModel)
    def ingest_gdp(body: TextIn):
        return schemas.GdpSeriesModel.from_core(ingest.parse_gdp_series(body.text, body.country))

    @app.post("/v1/ingest/population", response_model=schemas.PopulationSeriesModel)
    def ingest_population(body: TextIn):
        return schemas.PopulationSeriesModel.from_core(
            ingest.parse_population_series(body.text, body.country)
        )

    @app.post("/v1/ingest/income-bins")
    def ingest_income_bins(body: TextIn):
        tables = ingest.parse_binned_tables(body.text, body.country)
        if body.year is not None:
            tables = [t for t in tables if t.year == body.year]
            if not tables:
                raise DataValidationError(f"no income table for year {body.year}")
        return {"tables": [schemas.BinnedTableModel.from_core(t) for t in tables]}

    @app.post("/v1/ingest/microdata", response_model=schemas.MicrodataModel)
    def ingest_microdata(body: TextIn):
        return schemas.MicrodataModel.from_core(
            ingest.parse_microdata(body.text, body.country, body.year)
        )

    @app.post("/v1/ingest/distribution")
    def ingest_distribution(body: TextIn):
        tables = ingest.parse_distribution_tables(body.text, body.country)
        if body.year is not None:
            tables = [t for t in tables if t.year == body.year]
            if not tables:
                raise DataValidationError(f"no distribution table for year {body.year}")
        return {"tables": [schemas.DistributionTableModel.from_core(t) for t in tables]}

    @app.post("/v1/ingest/curve", response_model=schemas.CurveModel)
    def ingest_curve(body: TextIn):
        return schemas.CurveModel.from_core(curves.parse_curve_csv(body.text, body.label))

    @app.post("/v1/ingest/profile", response_model=schemas.ProfileModel)
    def ingest_profile(body: TextIn):
        return schemas.ProfileModel.from_core(inequality.parse_tail_profile(body.text, body.label))

    @app.post("/v1/ingest/corrected-gdp", response_model=schemas.GdpSeriesModel)
    def ingest_corrected_gdp(body: CorrectedGdpIn):
        corrected = ingest.correct_gdp_for_working_age(
            body.gdp.to_core(), body.population.to_core()
        )
        return schemas.GdpSeriesModel.from_core(corrected)

    @app.post("/v1/ingest/diagnostics")
    def ingest_diagnostics(body: DiagnosticsIn):
        return {"problems": ingest.collect_diagnostics(body.kind, body.text)}

    # ------------------------------------------------------------------ curves

    @app.post("/v1/curves/from-bins", response_model=schemas.CurveModel)
    def curve_from_bins(body: TableIn):
        return schemas.CurveModel.from_core(curves.bin_midpoint_curve(body.table.to_core()))

    @app.post("/v1/curves/from-microdata", response_model=schemas.CurveModel)
    def curve_from_microdata(body: MicrodataIn):
        return schemas.CurveModel.from_core(curves.mean_curve_from_microdata(body.data.to_core()))

    @app.post("/v1/curves/moving-average", response_model=schemas.CurveModel)
    def curve_moving_average(body: SmoothIn):
        return schemas.CurveModel.from_core(curves.moving_average(body.curve.to_core(), body.window))

    @app.post("/v1/curves/normalize", response_model=schemas.CurveModel)
    def curve_normalize(body: CurveIn):
        return schemas.CurveModel.from_core(curves.normalize_to_peak(body.curve.to_core()))

    @app.post("/v1/curves/spline", response_model=schemas.CurveModel)
    def curve_spline(body: GridIn):
        return schemas.CurveModel.from_core(
            curves.spline_interpolate(body.curve.to_core(), body.grid_step)
        )

    @app.post("/v1/curves/peak", response_model=schemas.PeakModel)
    def curve_peak(body: GridIn):
        return schemas.PeakModel.from_core(
            curves.estimate_peak(body.curve.to_core(), body.grid_step)
        )

    @app.post("/v1/curves/group-shares", response_model=schemas.GroupShareModel)
    def curve_group_shares(body: TablesIn):
        history = curves.group_share_history([t.to_core() for t in body.tables])
        return schemas.GroupShareModel.from_core(history)

    # ----------------------------------------------------------------- scaling

    @app.post("/v1/scaling/predict-peak")
    def scaling_predict_peak(body: PredictPeakIn):
        return scaling.predict_peak(body.base_work_exp, body.gdp_base, body.gdp_target).to_dict()

    @app.post("/v1/scaling/matching-year")
    def scaling_matching_year(body: MatchingYearIn):
        return scaling.find_matching_year(body.level, body.reference.to_core()).to_dict()

    @app.post("/v1/scaling/trend", response_model=schemas.TrendModel)
    def scaling_trend(body: TrendIn):
        window = None
        if body.year_from is not None or body.year_to is not None:
            series = body.series.to_core()
            window = (
                body.year_from if body.year_from is not None else series.points[0][0],
                body.year_to if body.year_to is not None else series.points[-1][0],
            )
        trend = scaling.fit_linear_trend(body.series.to_core(), window)
        return schemas.TrendModel.from_core(trend)

    @app.post("/v1/scaling/project")
    def scaling_project(body: ProjectIn):
        year = scaling.project_attainment(
            body.trend.to_core(), body.anchor_year, body.anchor_level, body.target_level
        )
        return {"year": year}

    @app.post("/v1/scaling/ratio")
    def scaling_ratio(body: RatioIn):
        points = scaling.series_ratio(body.numerator.to_core(), body.denominator.to_core())
        return {"points": [[y, r] for y, r in points]}

    # -------------------------------------------------------------- inequality

    @app.post("/v1/inequality/gini")
    def inequality_gini(body: MicrodataIn):
        return {"gini": inequality.gini(body.data.to_core())}

    @app.post("/v1/inequality/tail-by-age", response_model=schemas.ProfileModel)
    def inequality_tail_by_age(body: TailByAgeIn):
        profile = inequality.tail_portion_by_age(
            body.above.to_core(), body.population.to_core(), body.threshold
        )
        return schemas.ProfileModel.from_core(profile)

    @app.post("/v1/inequality/tail-profile", response_model=schemas.ProfileModel)
    def inequality_tail_profile(body: TailProfileIn):
        profile = inequality.tail_profile(body.table.to_core(), body.threshold)
        return schemas.ProfileModel.from_core(profile)

    @app.post("/v1/inequality/calibrate", response_model=schemas.CalibrationModel)
    def inequality_calibrate(body: CalibrateIn):
        result = inequality.calibrate_threshold(
            body.table.to_core(), body.target_portion, body.max_gap
        )
        return schemas.CalibrationModel.from_core(result)

    @app.post("/v1/inequality/normalize-profile", response_model=schemas.ProfileModel)
    def inequality_normalize_profile(body: ProfileIn):
        return schemas.ProfileModel.from_core(
            inequality.peak_normalize_profile(body.profile.to_core())
        )

    # ------------------------------------------------------------------- model

    @app.post("/v1/model/simulate")
    def model_simulate(body: SimulateIn):
        simulated = model.simulate_curve(
            body.g, body.params.to_core(), t_end=body.t_end, step=body.step
        )
        return {
            "gdp_pc": simulated.gdp_pc,
            "critical_work_exp": simulated.critical_work_exp,
            "work_capital": simulated.work_capital,
            "curve": schemas.CurveModel.from_core(simulated.as_curve()),
        }

    @app.post("/v1/model/integrate")
    def model_integrate(body: IntegrateIn):
        points = model.integrate_income(body.sigma, body.lam, body.t_end, body.dt)
        return {"points": [[t, m] for t, m in points]}

    @app.post("/v1/model/tail-portion")
    def model_tail_portion(body: TailPortionIn):
        portion = model.predicted_tail_portion(body.g, body.threshold, body.t, body.params.to_core())
        return {"portion": portion}

    @app.post("/v1/model/pareto-sample", response_model=schemas.MicrodataModel)
    def model_pareto_sample(body: ParetoIn):
        return schemas.MicrodataModel.from_core(model.sample_pareto(body.k, body.x_m, body.n, body.seed))

    # ------------------------------------------------------------------- match

    @app.post("/v1/match/curve", response_model=schemas.MatchResultModel)
    def match_curve(body: MatchCurveIn):
        result = matcher.match_curve(
            body.target.to_core(),
            {entry.year: entry.curve.to_core() for entry in body.library},
            reference_gdp=body.reference_gdp.to_core() if body.reference_gdp else None,
            target_gdp=body.target_gdp,
            target_year=body.target_year,
            min_overlap=body.min_overlap,
        )
        return schemas.MatchResultModel.from_core(result)

    @app.post("/v1/match/profiles", response_model=schemas.MatchResultModel)
    def match_profiles(body: MatchProfilesIn):
        result = matcher.match_profiles(
            body.target.to_core(),
            {entry.year: entry.profile.to_core() for entry in body.library},
            reference_gdp=body.reference_gdp.to_core() if body.reference_gdp else None,
            target_gdp=body.target_gdp,
            target_year=body.target_year,
            min_overlap=body.min_overlap,
        )
        return schemas.MatchResultModel.from_core(result)

    @app.post("/v1/match/report")
    def match_report(body: MatchReportIn):
        results = [r.to_core() for r in body.results]
        return matcher.match_report(results, body.corrections)

    return app
