"""Mean-income curves over work experience.

Ages convert to work experience by subtracting the workforce entry age
of 14, so a 52.5 year peak age is 38.5 years of work experience. Curves
are built from binned tables (bin midpoints) or from microdata (per-age
weighted means), optionally smoothed with a centred moving average,
peak-normalized, and resampled with a natural cubic spline to estimate
the peak location.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from . import _csvio
from .errors import DataValidationError, DomainError
from .ingest import BinnedIncomeTable, MicrodataSet, format_number

ENTRY_AGE = 14
# Work experience assigned to an open "under 20" bin. The bin has no
# midpoint, so a nominal early-career position is used and the point is
# excluded from peak estimation.
LEADING_OPEN_WORK_EXP = 2.0
# Half-width added past the lower edge of an open-ended eldest bin,
# mirroring the width of a five-year bin.
TRAILING_OPEN_OFFSET = 5.0

CURVE_HEADER = ["work_exp", "value", "normalized"]


def to_work_experience(age: float) -> float:
    """Years in the workforce for a given age."""
    if age < ENTRY_AGE:
        raise DomainError(f"age {age} is below the workforce entry age {ENTRY_AGE}")
    return age - ENTRY_AGE


def to_age(work_exp: float) -> float:
    return work_exp + ENTRY_AGE


@dataclass(frozen=True)
class MeanIncomeCurve:
    """Mean income sampled at points of work experience.

    ``illustrative`` lists indices of points carried for plotting only
    (open-ended bins); peak estimation and matching skip them.
    """

    label: str
    points: tuple[tuple[float, float], ...]
    normalized: bool = False
    illustrative: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.points:
            raise DataValidationError(f"curve {self.label!r} has no points")
        xs = [x for x, _ in self.points]
        if any(x < 0 for x in xs):
            raise DataValidationError(f"curve {self.label!r} has negative work experience")
        if sorted(xs) != xs or len(set(xs)) != len(xs):
            raise DataValidationError(f"curve {self.label!r} points must be strictly increasing")
        if any(v < 0 for _, v in self.points):
            raise DataValidationError(f"curve {self.label!r} has negative values")
        if any(i < 0 or i >= len(self.points) for i in self.illustrative):
            raise DataValidationError(f"curve {self.label!r} has out-of-range illustrative index")

    def work_exps(self) -> np.ndarray:
        return np.array([x for x, _ in self.points])

    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points])

    def solid_points(self) -> tuple[tuple[float, float], ...]:
        """Points that carry data weight, with illustrative ones dropped."""
        skip = set(self.illustrative)
        return tuple(p for i, p in enumerate(self.points) if i not in skip)


@dataclass(frozen=True)
class PeakEstimate:
    """Location of the mean-income maximum for one curve."""

    peak_work_exp: float
    peak_age: float
    peak_value: float
    grid_step: float
    bin_peak_work_exp: float  # argmax over the raw input points

    def to_dict(self) -> dict:
        return {
            "peak_work_exp": self.peak_work_exp,
            "peak_age": self.peak_age,
            "peak_value": self.peak_value,
            "grid_step": self.grid_step,
            "bin_peak_work_exp": self.bin_peak_work_exp,
        }


@dataclass(frozen=True)
class GroupShareHistory:
    """Per-group mean income relative to each year's maximum.

    ``shares`` is year-major: shares[i][j] is the share of group j in
    year years[i]. ``peak_midpoints`` records which group midpoint holds
    the maximum each year.
    """

    country: str
    midpoints: tuple[float, ...]
    years: tuple[int, ...]
    shares: tuple[tuple[float, ...], ...]
    peak_midpoints: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "country": self.country,
            "midpoints": list(self.midpoints),
            "years": list(self.years),
            "shares": [list(row) for row in self.shares],
            "peak_midpoints": list(self.peak_midpoints),
        }


def bin_midpoint_curve(table: BinnedIncomeTable) -> MeanIncomeCurve:
    """Place each age bin's mean income at the bin midpoint in work experience.

    Open-ended bins get nominal positions (leading: work experience 2,
    trailing: lower edge + 5) and are flagged illustrative. Zero-person
    bins carry no information and are dropped.
    """
    points = []
    illustrative = []
    for b in table.bins:
        if b.persons == 0:
            continue
        if b.age_lo is None:
            points.append((LEADING_OPEN_WORK_EXP, b.mean_income))
            illustrative.append(len(points) - 1)
        elif b.age_hi is None:
            points.append((to_work_experience(b.age_lo) + TRAILING_OPEN_OFFSET, b.mean_income))
            illustrative.append(len(points) - 1)
        else:
            mid = (b.age_lo + b.age_hi) / 2.0
            points.append((to_work_experience(mid), b.mean_income))
    return MeanIncomeCurve(
        label=f"{table.country} {table.year}",
        points=tuple(points),
        illustrative=tuple(illustrative),
    )


def mean_curve_from_microdata(data: MicrodataSet) -> MeanIncomeCurve:
    """Weighted mean income per single year of age, on the work-experience axis."""
    sums: dict[int, list[float]] = {}
    for age, income, weight in data.records:
        acc = sums.setdefault(age, [0.0, 0.0])
        acc[0] += weight * income
        acc[1] += weight
    points = tuple(
        (to_work_experience(float(age)), wsum / w) for age, (wsum, w) in sorted(sums.items())
    )
    return MeanIncomeCurve(label=f"{data.country} {data.year}", points=points)


def moving_average(curve: MeanIncomeCurve, window: int) -> MeanIncomeCurve:
    """Centred moving average over a curve sampled at one-year spacing.

    ``window`` must be odd. Near the ends the window shrinks
    symmetrically to the widest odd width that still fits, so the first
    and last points pass through unchanged.
    """
    if window < 1 or window % 2 == 0:
        raise DomainError(f"window must be a positive odd integer, got {window}")
    xs = curve.work_exps()
    if len(xs) > 1:
        steps = np.diff(xs)
        if np.any(np.abs(steps - 1.0) > 1e-9):
            raise DomainError(
                f"curve {curve.label!r} is not sampled at one-year spacing; interpolate first"
            )
    vs = curve.values()
    n = len(vs)
    half = window // 2
    smoothed = np.empty(n)
    for i in range(n):
        h = min(half, i, n - 1 - i)
        smoothed[i] = vs[i - h : i + h + 1].mean()
    points = tuple(zip(xs.tolist(), smoothed.tolist()))
    return replace(curve, points=points, normalized=False)


def normalize_to_peak(curve: MeanIncomeCurve) -> MeanIncomeCurve:
    """Scale a curve so its maximum point value is exactly 1."""
    peak = max(v for _, v in curve.points)
    if peak <= 0:
        raise DomainError(f"curve {curve.label!r} has no positive values to normalize by")
    points = tuple((x, v / peak) for x, v in curve.points)
    return replace(curve, points=points, normalized=True)


def _interpolator(curve: MeanIncomeCurve) -> CubicSpline:
    xs = curve.work_exps()
    if len(xs) < 3:
        raise DomainError(f"curve {curve.label!r} needs at least 3 points for a spline")
    return CubicSpline(xs, curve.values(), bc_type="natural")


def spline_interpolate(curve: MeanIncomeCurve, grid_step: float = 0.1) -> MeanIncomeCurve:
    """Resample a curve on a uniform grid with a natural cubic spline.

    The grid spans the closed support of the input, keeping the first
    and last input points as grid endpoints. Interpolated values may
    overshoot the input maximum; the result is therefore never marked
    normalized even when the input was.
    """
    if grid_step <= 0:
        raise DomainError(f"grid_step must be positive, got {grid_step}")
    spline = _interpolator(curve)
    xs = curve.work_exps()
    lo, hi = float(xs[0]), float(xs[-1])
    n_steps = int(np.floor((hi - lo) / grid_step + 1e-9))
    grid = lo + np.arange(n_steps + 1) * grid_step
    if hi - grid[-1] > 1e-9:
        grid = np.append(grid, hi)
    values = np.asarray(spline(grid), dtype=float)
    # A spline can dip a hair below zero between low points; income
    # curves are non-negative by construction.
    values = np.clip(values, 0.0, None)
    points = tuple(zip(grid.tolist(), values.tolist()))
    return MeanIncomeCurve(label=curve.label, points=points, normalized=False)


def estimate_peak(curve: MeanIncomeCurve, grid_step: float = 0.1) -> PeakEstimate:
    """Locate the curve maximum on a spline resampled at ``grid_step``.

    Illustrative open-bin points are excluded before fitting. Grid ties
    resolve toward smaller work experience. The raw-point argmax is
    reported alongside as ``bin_peak_work_exp``.
    """
    solid = curve.solid_points()
    if len(solid) < 3:
        raise DomainError(
            f"curve {curve.label!r} has {len(solid)} usable points; peak estimation needs 3"
        )
    base = MeanIncomeCurve(label=curve.label, points=solid, normalized=curve.normalized)
    dense = spline_interpolate(base, grid_step)
    values = dense.values()
    idx = int(np.argmax(values))
    peak_x = dense.points[idx][0]
    bin_peak = max(solid, key=lambda p: p[1])[0]
    return PeakEstimate(
        peak_work_exp=float(peak_x),
        peak_age=to_age(float(peak_x)),
        peak_value=float(values[idx]),
        grid_step=grid_step,
        bin_peak_work_exp=float(bin_peak),
    )


def group_share_history(tables: list[BinnedIncomeTable]) -> GroupShareHistory:
    """Track each age group's share of the yearly maximum mean income.

    All tables must share one country and one bin layout. The leading
    open bin is dropped; closed bins enter at their midpoints and a
    trailing open bin at its nominal position.
    """
    if not tables:
        raise DataValidationError("group share history needs at least one table")
    tables = sorted(tables, key=lambda t: t.year)
    country = tables[0].country
    layout = tables[0].layout()
    for t in tables[1:]:
        if t.country != country:
            raise DataValidationError(f"tables mix countries {country!r} and {t.country!r}")
        if t.layout() != layout:
            raise DataValidationError(f"table {t.country} {t.year} has a different bin layout")
    years = [t.year for t in tables]
    if len(set(years)) != len(years):
        raise DataValidationError("group share history has duplicate years")

    keep = [i for i, (lo, _) in enumerate(layout) if lo is not None]
    midpoints = []
    for i in keep:
        lo, hi = layout[i]
        if hi is None:
            midpoints.append(to_work_experience(lo) + TRAILING_OPEN_OFFSET)
        else:
            midpoints.append(to_work_experience((lo + hi) / 2.0))

    shares = []
    peak_midpoints = []
    for t in tables:
        values = np.array([t.bins[i].mean_income for i in keep])
        top = values.max()
        if top <= 0:
            raise DomainError(f"table {t.country} {t.year} has no positive mean income")
        row = values / top
        shares.append(tuple(row.tolist()))
        peak_midpoints.append(midpoints[int(np.argmax(values))])
    return GroupShareHistory(
        country=country,
        midpoints=tuple(midpoints),
        years=tuple(years),
        shares=tuple(shares),
        peak_midpoints=tuple(peak_midpoints),
    )


# ---------------------------------------------------------------------------
# curve files


def curve_csv_text(curve: MeanIncomeCurve) -> str:
    flag = "true" if curve.normalized else "false"
    lines = [",".join(CURVE_HEADER)]
    for x, v in curve.points:
        lines.append(f"{format_number(x)},{format_number(v)},{flag}")
    return "\n".join(lines) + "\n"


def parse_curve_csv(source: str | Path, label: str | None = None) -> MeanIncomeCurve:
    """Read a curve CSV (header work_exp,value,normalized).

    The normalized flag must be constant across rows. The label
    defaults to the file stem when the source is a path.
    """
    rows = _csvio.read_rows(source, CURVE_HEADER)
    points = []
    flags = set()
    for i, rec in rows:
        x = _csvio.parse_float(rec["work_exp"], "work_exp", i)
        v = _csvio.parse_float(rec["value"], "value", i)
        raw_flag = rec["normalized"].lower()
        if raw_flag not in ("true", "false"):
            raise DataValidationError(f"normalized must be true or false, got {rec['normalized']!r}", row=i)
        flags.add(raw_flag)
        points.append((x, v))
    if len(flags) > 1:
        raise DataValidationError("normalized flag is not constant across rows")
    if label is None:
        text = str(source)
        label = Path(text).stem if "\n" not in text and text and Path(text).is_file() else "curve"
    return MeanIncomeCurve(label=label, points=tuple(points), normalized=flags.pop() == "true")
