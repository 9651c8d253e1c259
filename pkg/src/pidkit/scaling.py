"""Critical-age scaling against real GDP per capita.

The peak of the mean-income curve moves with the square root of real
GDP per capita: two observation sets with peaks T1 and T2 satisfy
T2 = T1 * sqrt(g2 / g1). The helpers here apply that law, locate the
calendar year at which a reference economy passed a given GDP level,
fit linear GDP trends, and project attainment years.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import to_age
from .errors import DomainError, InsufficientDataError
from .ingest import GdpSeries


@dataclass(frozen=True)
class CriticalAgePrediction:
    """Peak work experience rescaled from one GDP level to another."""

    base_work_exp: float
    gdp_base: float
    gdp_target: float
    predicted_work_exp: float
    predicted_age: float

    def to_dict(self) -> dict:
        return {
            "base_work_exp": self.base_work_exp,
            "gdp_base": self.gdp_base,
            "gdp_target": self.gdp_target,
            "predicted_work_exp": self.predicted_work_exp,
            "predicted_age": self.predicted_age,
        }


@dataclass(frozen=True)
class MatchingYear:
    """Calendar year at which a GDP series crossed a given level.

    ``year`` is the sample year nearest the interpolated crossing.
    When the series crosses the level more than once the earliest
    crossing is canonical and all crossings are listed.
    """

    year: int
    interpolated_year: float
    reference_level: float
    crossings: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "year": self.year,
            "interpolated_year": self.interpolated_year,
            "reference_level": self.reference_level,
            "crossings": list(self.crossings),
        }


@dataclass(frozen=True)
class LinearTrend:
    """Least-squares line gdp_pc = slope * year + intercept."""

    slope: float
    intercept: float
    year_from: int
    year_to: int

    def value_at(self, year: float) -> float:
        return self.slope * year + self.intercept

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "year_from": self.year_from,
            "year_to": self.year_to,
        }


def predict_peak(base_work_exp: float, gdp_base: float, gdp_target: float) -> CriticalAgePrediction:
    """Rescale a peak work experience by sqrt(gdp_target / gdp_base)."""
    if base_work_exp <= 0:
        raise DomainError(f"base work experience must be positive, got {base_work_exp}")
    if gdp_base <= 0 or gdp_target <= 0:
        raise DomainError("GDP levels must be positive")
    predicted = base_work_exp * math.sqrt(gdp_target / gdp_base)
    return CriticalAgePrediction(
        base_work_exp=base_work_exp,
        gdp_base=gdp_base,
        gdp_target=gdp_target,
        predicted_work_exp=predicted,
        predicted_age=to_age(predicted),
    )


def find_matching_year(level: float, reference: GdpSeries) -> MatchingYear:
    """Locate when a reference series reached a GDP per capita level.

    Crossings are linearly interpolated between annual samples. A level
    outside the observed range raises InsufficientDataError naming the
    nearest endpoint.
    """
    if level <= 0:
        raise DomainError(f"level must be positive, got {level}")
    years = [float(y) for y, _ in reference.points]
    values = [g for _, g in reference.points]
    lo, hi = min(values), max(values)
    if level < lo or level > hi:
        end_idx = values.index(lo) if level < lo else values.index(hi)
        nearest_year = reference.points[end_idx][0]
        nearest_level = values[end_idx]
        raise InsufficientDataError(
            f"level {level} outside the observed range [{lo}, {hi}] of {reference.country!r}; "
            f"nearest endpoint is {nearest_level} in {nearest_year}"
        )
    crossings: list[float] = []
    for i in range(len(values) - 1):
        g0, g1 = values[i], values[i + 1]
        y0, y1 = years[i], years[i + 1]
        if g0 == level:
            crossings.append(y0)
        elif (g0 - level) * (g1 - level) < 0:
            crossings.append(y0 + (level - g0) * (y1 - y0) / (g1 - g0))
    if values[-1] == level:
        crossings.append(years[-1])
    deduped: list[float] = []
    for t in crossings:
        if not deduped or abs(t - deduped[-1]) > 1e-12:
            deduped.append(t)
    earliest = deduped[0]
    year = int(round(earliest))
    year = min(max(year, reference.points[0][0]), reference.points[-1][0])
    return MatchingYear(
        year=year,
        interpolated_year=earliest,
        reference_level=reference.level(year),
        crossings=tuple(deduped),
    )


def fit_linear_trend(series: GdpSeries, window: tuple[int, int] | None = None) -> LinearTrend:
    """Fit an ordinary least-squares line to GDP per capita over years.

    ``window`` restricts the fit to an inclusive [from, to] span.
    """
    points = series.points
    if window is not None:
        y0, y1 = window
        if y0 > y1:
            raise DomainError(f"window is empty: {y0} > {y1}")
        points = tuple(p for p in points if y0 <= p[0] <= y1)
    if len(points) < 2:
        raise InsufficientDataError(
            f"trend fit needs at least 2 points, got {len(points)} in window {window}"
        )
    xs = np.array([y for y, _ in points], dtype=float)
    ys = np.array([g for _, g in points], dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    return LinearTrend(
        slope=float(slope),
        intercept=float(intercept),
        year_from=points[0][0],
        year_to=points[-1][0],
    )


def project_attainment(
    trend: LinearTrend, anchor_year: float, anchor_level: float, target_level: float
) -> float:
    """Year at which a linear trend anchored at (anchor_year, anchor_level) hits a target."""
    if anchor_level <= 0 or target_level <= 0:
        raise DomainError("levels must be positive")
    if target_level == anchor_level:
        return float(anchor_year)
    if trend.slope <= 0 and target_level > anchor_level:
        raise InsufficientDataError(
            f"target {target_level} is above the anchor {anchor_level} "
            f"but the trend slope is {trend.slope}; unreachable"
        )
    if trend.slope >= 0 and target_level < anchor_level:
        raise InsufficientDataError(
            f"target {target_level} is below the anchor {anchor_level} "
            f"but the trend slope is {trend.slope}; unreachable"
        )
    return anchor_year + (target_level - anchor_level) / trend.slope


def series_ratio(numerator: GdpSeries, denominator: GdpSeries) -> tuple[tuple[int, float], ...]:
    """Year-by-year ratio of two GDP series over their common years."""
    denom = dict(denominator.points)
    common = [(y, g / denom[y]) for y, g in numerator.points if y in denom]
    if not common:
        raise InsufficientDataError(
            f"series {numerator.country!r} and {denominator.country!r} share no years"
        )
    return tuple(common)
