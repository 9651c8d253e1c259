"""Match observed curves against a reference library by RMS misfit.

Both sides are spline-resampled onto a common one-year grid over their
overlap in work experience and compared by root-mean-square difference.
The library year with the smallest misfit wins; ties go to the year
whose GDP per capita is closest to the target's, if GDP context is
given, and otherwise to the earliest year. Peak-normalized tail
profiles are matched with the same engine over age-bracket midpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.interpolate import CubicSpline

from .curves import MeanIncomeCurve, TRAILING_OPEN_OFFSET
from .errors import DomainError, InsufficientDataError
from .inequality import TailProfile
from .ingest import GdpSeries

MIN_OVERLAP_YEARS = 20.0


@dataclass(frozen=True)
class MatchResult:
    """Best reference year for one target curve."""

    target_label: str
    target_year: int | None
    best_year: int
    misfit: float
    max_deviation: float
    runner_ups: tuple[tuple[int, float], ...]
    gdp_target: float | None = None
    gdp_reference: float | None = None

    @property
    def lag_years(self) -> int | None:
        if self.target_year is None:
            return None
        return self.target_year - self.best_year

    def to_dict(self) -> dict:
        return {
            "target": self.target_label,
            "target_year": self.target_year,
            "best_year": self.best_year,
            "misfit": self.misfit,
            "max_deviation": self.max_deviation,
            "runner_ups": [[y, m] for y, m in self.runner_ups],
            "gdp_target": self.gdp_target,
            "gdp_reference": self.gdp_reference,
            "lag_years": self.lag_years,
        }


def _solid_spline(curve: MeanIncomeCurve) -> tuple[CubicSpline, float, float]:
    points = curve.solid_points()
    if len(points) < 3:
        raise DomainError(f"curve {curve.label!r} has fewer than 3 usable points")
    xs = np.array([x for x, _ in points])
    ys = np.array([v for _, v in points])
    return CubicSpline(xs, ys, bc_type="natural"), float(xs[0]), float(xs[-1])


def match_curve(
    target: MeanIncomeCurve,
    library: Mapping[int, MeanIncomeCurve],
    reference_gdp: GdpSeries | None = None,
    target_gdp: float | None = None,
    target_year: int | None = None,
    min_overlap: float = MIN_OVERLAP_YEARS,
) -> MatchResult:
    """Find the library year whose curve lies closest to the target.

    All curves must be peak-normalized. Library entries whose overlap
    with the target is shorter than ``min_overlap`` years are excluded;
    if none remains the match fails naming the longest overlap seen.
    """
    if not library:
        raise DomainError("reference library is empty")
    if not target.normalized:
        raise DomainError(f"target curve {target.label!r} is not normalized")
    for year, curve in library.items():
        if not curve.normalized:
            raise DomainError(f"library curve for {year} is not normalized")

    t_spline, t_lo, t_hi = _solid_spline(target)
    scored: list[tuple[int, float, float]] = []
    longest = 0.0
    for year in sorted(library):
        l_spline, l_lo, l_hi = _solid_spline(library[year])
        lo, hi = max(t_lo, l_lo), min(t_hi, l_hi)
        longest = max(longest, hi - lo)
        if hi - lo < min_overlap:
            continue
        grid = np.arange(lo, hi + 1e-9, 1.0)
        diff = np.asarray(t_spline(grid)) - np.asarray(l_spline(grid))
        misfit = float(np.sqrt(np.mean(diff * diff)))
        scored.append((year, misfit, float(np.max(np.abs(diff)))))
    if not scored:
        raise InsufficientDataError(
            f"no library curve overlaps {target.label!r} by {min_overlap:g} years; "
            f"longest overlap is {longest:.1f} years"
        )

    best_misfit = min(m for _, m, _ in scored)
    tol = 1e-12 * max(1.0, best_misfit)
    tied = [entry for entry in scored if entry[1] <= best_misfit + tol]
    if len(tied) > 1 and reference_gdp is not None and target_gdp is not None:
        tied.sort(key=lambda e: (abs(reference_gdp.level(e[0]) - target_gdp), e[0]))
    else:
        tied.sort(key=lambda e: e[0])
    best_year, misfit, max_dev = tied[0]

    runner_ups = tuple(
        (y, m) for y, m, _ in sorted(scored, key=lambda e: (e[1], e[0])) if y != best_year
    )
    gdp_reference = None
    if reference_gdp is not None:
        try:
            gdp_reference = reference_gdp.level(best_year)
        except Exception:
            gdp_reference = None
    return MatchResult(
        target_label=target.label,
        target_year=target_year,
        best_year=best_year,
        misfit=misfit,
        max_deviation=max_dev,
        runner_ups=runner_ups,
        gdp_target=target_gdp,
        gdp_reference=gdp_reference,
    )


def profile_to_curve(profile: TailProfile) -> MeanIncomeCurve:
    """Lay a tail profile out as a curve over age-bracket midpoints.

    An open lower bracket gets the midpoint of [0, hi]; an open upper
    bracket sits five years past its lower edge. The x axis is age, not
    work experience, which is consistent across profiles sharing a
    bracket convention.
    """
    points = []
    for lo, hi, portion in profile.per_bin:
        if lo is None:
            x = hi / 2.0
        elif hi is None:
            x = lo + TRAILING_OPEN_OFFSET
        else:
            x = (lo + hi) / 2.0
        points.append((float(x), portion))
    points.sort()
    return MeanIncomeCurve(
        label=profile.label or "profile", points=tuple(points), normalized=profile.normalized
    )


def match_profiles(
    target: TailProfile,
    library: Mapping[int, TailProfile],
    reference_gdp: GdpSeries | None = None,
    target_gdp: float | None = None,
    target_year: int | None = None,
    min_overlap: float = MIN_OVERLAP_YEARS,
) -> MatchResult:
    """Match a peak-normalized tail profile against a library of profiles."""
    return match_curve(
        profile_to_curve(target),
        {year: profile_to_curve(p) for year, p in library.items()},
        reference_gdp=reference_gdp,
        target_gdp=target_gdp,
        target_year=target_year,
        min_overlap=min_overlap,
    )


def match_report(
    results: list[MatchResult], corrections: Mapping[str, float] | None = None
) -> dict:
    """Tabulate match results with optional working-age GDP corrections.

    ``corrections`` maps a target label to a multiplicative factor
    applied to the matched reference GDP; absent labels keep factor 1.
    """
    corrections = corrections or {}
    unknown = set(corrections) - {r.target_label for r in results}
    if unknown:
        raise DomainError(f"corrections name unknown targets: {sorted(unknown)}")
    rows = []
    for r in results:
        factor = corrections.get(r.target_label, 1.0)
        if factor <= 0:
            raise DomainError(f"correction factor for {r.target_label!r} must be positive")
        corrected = None if r.gdp_reference is None else r.gdp_reference * factor
        row = r.to_dict()
        row["correction_factor"] = factor
        row["gdp_reference_corrected"] = corrected
        rows.append(row)
    return {"matches": rows}
