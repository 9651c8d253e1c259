"""Pydantic wire models mirroring the core dataclasses."""

from __future__ import annotations

from pydantic import BaseModel, Field

from .. import curves, inequality, ingest, matcher, model, scaling


class GdpSeriesModel(BaseModel):
    country: str
    points: list[tuple[int, float]]

    def to_core(self) -> ingest.GdpSeries:
        return ingest.GdpSeries(country=self.country, points=tuple(self.points))

    @classmethod
    def from_core(cls, series: ingest.GdpSeries) -> "GdpSeriesModel":
        return cls(country=series.country, points=list(series.points))


class PopulationSeriesModel(BaseModel):
    country: str
    points: list[tuple[int, float, float]]

    def to_core(self) -> ingest.PopulationSeries:
        return ingest.PopulationSeries(country=self.country, points=tuple(self.points))

    @classmethod
    def from_core(cls, series: ingest.PopulationSeries) -> "PopulationSeriesModel":
        return cls(country=series.country, points=list(series.points))


class AgeBinModel(BaseModel):
    age_lo: int | None = None
    age_hi: int | None = None
    persons: float
    mean_income: float


class BinnedTableModel(BaseModel):
    country: str
    year: int
    currency: str
    bins: list[AgeBinModel]

    def to_core(self) -> ingest.BinnedIncomeTable:
        return ingest.BinnedIncomeTable(
            country=self.country,
            year=self.year,
            currency=self.currency,
            bins=tuple(
                ingest.AgeBin(b.age_lo, b.age_hi, b.persons, b.mean_income) for b in self.bins
            ),
        )

    @classmethod
    def from_core(cls, table: ingest.BinnedIncomeTable) -> "BinnedTableModel":
        return cls(
            country=table.country,
            year=table.year,
            currency=table.currency,
            bins=[
                AgeBinModel(
                    age_lo=b.age_lo, age_hi=b.age_hi, persons=b.persons, mean_income=b.mean_income
                )
                for b in table.bins
            ],
        )


class MicrodataModel(BaseModel):
    country: str
    year: int
    records: list[tuple[int, float, float]]

    def to_core(self) -> ingest.MicrodataSet:
        return ingest.MicrodataSet(
            country=self.country, year=self.year, records=tuple(self.records)
        )

    @classmethod
    def from_core(cls, data: ingest.MicrodataSet) -> "MicrodataModel":
        return cls(country=data.country, year=data.year, records=list(data.records))


class DistCellModel(BaseModel):
    age_lo: int | None = None
    age_hi: int | None = None
    income_lo: float
    income_hi: float | None = None
    persons: float


class DistributionTableModel(BaseModel):
    country: str
    year: int
    currency: str
    cells: list[DistCellModel]

    def to_core(self) -> ingest.IncomeDistributionTable:
        return ingest.IncomeDistributionTable(
            country=self.country,
            year=self.year,
            currency=self.currency,
            cells=tuple(
                ingest.DistBin(c.age_lo, c.age_hi, c.income_lo, c.income_hi, c.persons)
                for c in self.cells
            ),
        )

    @classmethod
    def from_core(cls, table: ingest.IncomeDistributionTable) -> "DistributionTableModel":
        return cls(
            country=table.country,
            year=table.year,
            currency=table.currency,
            cells=[
                DistCellModel(
                    age_lo=c.age_lo,
                    age_hi=c.age_hi,
                    income_lo=c.income_lo,
                    income_hi=c.income_hi,
                    persons=c.persons,
                )
                for c in table.cells
            ],
        )


class CurveModel(BaseModel):
    label: str
    points: list[tuple[float, float]]
    normalized: bool = False
    illustrative: list[int] = Field(default_factory=list)

    def to_core(self) -> curves.MeanIncomeCurve:
        return curves.MeanIncomeCurve(
            label=self.label,
            points=tuple(self.points),
            normalized=self.normalized,
            illustrative=tuple(self.illustrative),
        )

    @classmethod
    def from_core(cls, curve: curves.MeanIncomeCurve) -> "CurveModel":
        return cls(
            label=curve.label,
            points=list(curve.points),
            normalized=curve.normalized,
            illustrative=list(curve.illustrative),
        )


class PeakModel(BaseModel):
    peak_work_exp: float
    peak_age: float
    peak_value: float
    grid_step: float
    bin_peak_work_exp: float

    @classmethod
    def from_core(cls, peak: curves.PeakEstimate) -> "PeakModel":
        return cls(**peak.to_dict())


class GroupShareModel(BaseModel):
    country: str
    midpoints: list[float]
    years: list[int]
    shares: list[list[float]]
    peak_midpoints: list[float]

    @classmethod
    def from_core(cls, history: curves.GroupShareHistory) -> "GroupShareModel":
        return cls(**history.to_dict())


class ProfileBinModel(BaseModel):
    age_lo: int | None = None
    age_hi: int | None = None
    portion: float


class ProfileModel(BaseModel):
    label: str = ""
    threshold: float | None = None
    total_portion: float | None = None
    normalized: bool = False
    per_bin: list[ProfileBinModel]
    flagged: list[int] = Field(default_factory=list)

    def to_core(self) -> inequality.TailProfile:
        return inequality.TailProfile(
            per_bin=tuple((b.age_lo, b.age_hi, b.portion) for b in self.per_bin),
            total_portion=self.total_portion,
            threshold=self.threshold,
            label=self.label,
            normalized=self.normalized,
            flagged=tuple(self.flagged),
        )

    @classmethod
    def from_core(cls, profile: inequality.TailProfile) -> "ProfileModel":
        return cls(
            label=profile.label,
            threshold=profile.threshold,
            total_portion=profile.total_portion,
            normalized=profile.normalized,
            per_bin=[
                ProfileBinModel(age_lo=lo, age_hi=hi, portion=p) for lo, hi, p in profile.per_bin
            ],
            flagged=list(profile.flagged),
        )


class CalibrationModel(BaseModel):
    threshold: float
    achieved_portion: float
    target_portion: float
    warning: str | None = None

    @classmethod
    def from_core(cls, result: inequality.CalibrationResult) -> "CalibrationModel":
        return cls(**result.to_dict())


class TrendModel(BaseModel):
    slope: float
    intercept: float
    year_from: int
    year_to: int

    def to_core(self) -> scaling.LinearTrend:
        return scaling.LinearTrend(
            slope=self.slope,
            intercept=self.intercept,
            year_from=self.year_from,
            year_to=self.year_to,
        )

    @classmethod
    def from_core(cls, trend: scaling.LinearTrend) -> "TrendModel":
        return cls(**trend.to_dict())


class ParamsModel(BaseModel):
    lambda_ref: float = 10.0
    g_ref: float = 20000.0
    tc_ref: float = 30.0
    beta: float = model.DEFAULT_BETA
    dt: float = 0.01
    sigma_levels: list[float] = Field(default_factory=lambda: [float(k) for k in range(1, 11)])
    sigma_weights: list[float] = Field(default_factory=lambda: [0.1] * 10)

    def to_core(self) -> model.ModelParams:
        return model.ModelParams(
            lambda_ref=self.lambda_ref,
            g_ref=self.g_ref,
            tc_ref=self.tc_ref,
            beta=self.beta,
            dt=self.dt,
            sigma_levels=tuple(self.sigma_levels),
            sigma_weights=tuple(self.sigma_weights),
        )


class MatchResultModel(BaseModel):
    target_label: str
    target_year: int | None = None
    best_year: int
    misfit: float
    max_deviation: float
    runner_ups: list[tuple[int, float]] = Field(default_factory=list)
    gdp_target: float | None = None
    gdp_reference: float | None = None
    lag_years: int | None = None

    def to_core(self) -> matcher.MatchResult:
        return matcher.MatchResult(
            target_label=self.target_label,
            target_year=self.target_year,
            best_year=self.best_year,
            misfit=self.misfit,
            max_deviation=self.max_deviation,
            runner_ups=tuple(self.runner_ups),
            gdp_target=self.gdp_target,
            gdp_reference=self.gdp_reference,
        )

    @classmethod
    def from_core(cls, result: matcher.MatchResult) -> "MatchResultModel":
        return cls(
            target_label=result.target_label,
            target_year=result.target_year,
            best_year=result.best_year,
            misfit=result.misfit,
            max_deviation=result.max_deviation,
            runner_ups=list(result.runner_ups),
            gdp_target=result.gdp_target,
            gdp_reference=result.gdp_reference,
            lag_years=result.lag_years,
        )
