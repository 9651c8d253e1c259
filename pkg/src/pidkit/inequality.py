"""Inequality measures: weighted Gini and age-resolved high-income portions.

The Gini coefficient uses the exact pairwise definition evaluated in
O(n log n) via the sorted cumulative form

    G = sum_i w_i (x_i C_{i-1} - S_{i-1}) / (W * sum_i w_i x_i)

with C and S the cumulative weight and weighted income below rank i.
Tail portions count, per age bracket, the fraction of people whose
income clears a threshold; thresholds are restricted to the bracket
edges of the underlying table.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import _csvio
from .errors import DataValidationError, DomainError
from .ingest import (
    BinnedIncomeTable,
    IncomeDistributionTable,
    MicrodataSet,
    format_number,
)

PROFILE_HEADER = ["age_lo", "age_hi", "portion"]

# Age brackets reaching below this age mix students and part-time
# earners into the denominator, which biases their portion low.
YOUNGEST_RELIABLE_AGE = 15


@dataclass(frozen=True)
class TailProfile:
    """Portion of persons above an income threshold, by age bracket.

    ``total_portion`` is population-weighted and therefore only known
    when the profile was computed from counts; profiles read back from
    a per-bracket CSV leave it as None.
    """

    per_bin: tuple[tuple[int | None, int | None, float], ...]  # (age_lo, age_hi, portion)
    total_portion: float | None
    threshold: float | None = None
    label: str = ""
    normalized: bool = False
    flagged: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.per_bin:
            raise DataValidationError(f"profile {self.label!r} has no bins")
        top = 1.0 + 1e-9
        for lo, hi, portion in self.per_bin:
            if portion < 0 or portion > top:
                raise DataValidationError(f"portion {portion} outside [0, 1] in profile {self.label!r}")
        if self.total_portion is not None and not 0 <= self.total_portion <= top:
            raise DataValidationError(f"total portion {self.total_portion} outside [0, 1]")

    def portions(self) -> np.ndarray:
        return np.array([p for _, _, p in self.per_bin])

    def argmax_bin(self) -> tuple[int | None, int | None]:
        lo, hi, _ = max(self.per_bin, key=lambda b: b[2])
        return lo, hi

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "threshold": self.threshold,
            "total_portion": self.total_portion,
            "normalized": self.normalized,
            "peak_bin": list(self.argmax_bin()),
            "per_bin": [
                {"age_lo": lo, "age_hi": hi, "portion": p} for lo, hi, p in self.per_bin
            ],
            "flagged_bins": list(self.flagged),
        }


@dataclass(frozen=True)
class CalibrationResult:
    """Bracket edge whose tail portion lies nearest a target."""

    threshold: float
    achieved_portion: float
    target_portion: float
    warning: str | None = None

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "achieved_portion": self.achieved_portion,
            "target_portion": self.target_portion,
            "warning": self.warning,
        }


def gini(data: MicrodataSet) -> float:
    """Weighted Gini coefficient of a microdata set."""
    records = np.array(data.records, dtype=float)
    incomes = records[:, 1]
    weights = records[:, 2]
    total_income = float(np.dot(weights, incomes))
    if total_income <= 0:
        raise DomainError("all incomes are zero; the Gini coefficient is undefined")
    order = np.argsort(incomes, kind="stable")
    xs = incomes[order]
    ws = weights[order]
    cum_w = np.cumsum(ws)
    cum_wx = np.cumsum(ws * xs)
    c_prev = np.concatenate(([0.0], cum_w[:-1]))
    s_prev = np.concatenate(([0.0], cum_wx[:-1]))
    numerator = float(np.sum(ws * (xs * c_prev - s_prev)))
    return numerator / (float(cum_w[-1]) * total_income)


def tail_portion_by_age(
    above: BinnedIncomeTable, population: BinnedIncomeTable, threshold: float
) -> TailProfile:
    """Per-bracket portions from a high-income count table and a population table.

    Both tables must share the country, year and bracket layout. The
    ``persons`` column of ``above`` counts people over the threshold.
    """
    if threshold <= 0:
        raise DomainError(f"threshold must be positive, got {threshold}")
    if (above.country, above.year) != (population.country, population.year):
        raise DataValidationError(
            f"tables disagree: {above.country} {above.year} vs {population.country} {population.year}"
        )
    if above.layout() != population.layout():
        raise DataValidationError("count and population tables have different bracket layouts")
    per_bin = []
    flagged = []
    for i, (hi_bin, pop_bin) in enumerate(zip(above.bins, population.bins)):
        if hi_bin.persons > pop_bin.persons:
            raise DataValidationError(
                f"bracket starting {pop_bin.age_lo}: count {hi_bin.persons} exceeds population {pop_bin.persons}"
            )
        portion = 0.0 if pop_bin.persons == 0 else hi_bin.persons / pop_bin.persons
        per_bin.append((pop_bin.age_lo, pop_bin.age_hi, portion))
        if pop_bin.age_lo is None or pop_bin.age_lo < YOUNGEST_RELIABLE_AGE:
            flagged.append(i)
    total_above = sum(b.persons for b in above.bins)
    total_pop = sum(b.persons for b in population.bins)
    if total_pop <= 0:
        raise DomainError("population table is empty")
    return TailProfile(
        per_bin=tuple(per_bin),
        total_portion=total_above / total_pop,
        threshold=threshold,
        label=f"{above.country} {above.year}",
        flagged=tuple(flagged),
    )


def _resolve_edge(table: IncomeDistributionTable, threshold: float) -> float:
    edges = table.income_edges()
    for edge in edges:
        if abs(edge - threshold) <= 1e-6 * max(1.0, abs(edge)):
            return edge
    pretty = ", ".join(format_number(e) for e in edges)
    raise DomainError(
        f"threshold {format_number(threshold)} is not a bracket edge of "
        f"{table.country} {table.year}; available edges: {pretty}"
    )


def tail_profile(table: IncomeDistributionTable, threshold: float) -> TailProfile:
    """Portions above a threshold from an age x income-bracket table.

    The threshold must coincide with one of the table's bracket edges;
    counts within a bracket cannot be split.
    """
    edge = _resolve_edge(table, threshold)
    per_bin = []
    flagged = []
    total_above = 0.0
    total_pop = 0.0
    for i, (age_lo, age_hi) in enumerate(table.age_layout()):
        cells = [c for c in table.cells if (c.age_lo, c.age_hi) == (age_lo, age_hi)]
        pop = sum(c.persons for c in cells)
        above = sum(c.persons for c in cells if c.income_lo >= edge)
        portion = 0.0 if pop == 0 else above / pop
        per_bin.append((age_lo, age_hi, portion))
        if age_lo is None or age_lo < YOUNGEST_RELIABLE_AGE:
            flagged.append(i)
        total_above += above
        total_pop += pop
    if total_pop <= 0:
        raise DomainError(f"distribution {table.country} {table.year} is empty")
    return TailProfile(
        per_bin=tuple(per_bin),
        total_portion=total_above / total_pop,
        threshold=edge,
        label=f"{table.country} {table.year}",
        flagged=tuple(flagged),
    )


def calibrate_threshold(
    table: IncomeDistributionTable, target_portion: float, max_gap: float = 0.005
) -> CalibrationResult:
    """Pick the bracket edge whose total tail portion is nearest a target.

    Ties resolve toward the smaller edge. When even the best edge
    misses the target by more than ``max_gap`` the result carries a
    warning rather than failing: bracket edges are the only admissible
    thresholds.
    """
    if not 0 < target_portion <= 1:
        raise DomainError(f"target portion must be in (0, 1], got {target_portion}")
    best: CalibrationResult | None = None
    best_gap = None
    for edge in table.income_edges():
        achieved = tail_profile(table, edge).total_portion
        gap = abs(achieved - target_portion)
        if best_gap is None or gap < best_gap - 1e-15:
            best_gap = gap
            best = CalibrationResult(
                threshold=edge, achieved_portion=achieved, target_portion=target_portion
            )
    assert best is not None and best_gap is not None
    if best_gap > max_gap:
        best = replace(
            best,
            warning=(
                f"nearest admissible edge {format_number(best.threshold)} reaches "
                f"{best.achieved_portion:.4f}, {best_gap:.4f} away from the target"
            ),
        )
    return best


def peak_normalize_profile(profile: TailProfile) -> TailProfile:
    """Scale per-bracket portions so the largest equals 1."""
    top = max(p for _, _, p in profile.per_bin)
    if top <= 0:
        raise DomainError(f"profile {profile.label!r} has no positive portions")
    per_bin = tuple((lo, hi, p / top) for lo, hi, p in profile.per_bin)
    return replace(profile, per_bin=per_bin, normalized=True)


# ---------------------------------------------------------------------------
# profile files


def profile_csv_text(profile: TailProfile) -> str:
    lines = [",".join(PROFILE_HEADER)]
    for lo, hi, portion in profile.per_bin:
        lo_s = "" if lo is None else str(lo)
        hi_s = "" if hi is None else str(hi)
        lines.append(f"{lo_s},{hi_s},{format_number(portion)}")
    return "\n".join(lines) + "\n"


def parse_tail_profile(source: str | Path, label: str | None = None) -> TailProfile:
    """Read a tail profile CSV (header age_lo,age_hi,portion)."""
    rows = _csvio.read_rows(source, PROFILE_HEADER)
    per_bin = []
    flagged = []
    for i, rec in rows:
        lo = None if rec["age_lo"] == "" else _csvio.parse_int(rec["age_lo"], "age_lo", i)
        hi = None if rec["age_hi"] == "" else _csvio.parse_int(rec["age_hi"], "age_hi", i)
        if lo is None and hi is None:
            raise DataValidationError("bracket cannot be open at both ends", row=i)
        portion = _csvio.parse_float(rec["portion"], "portion", i)
        per_bin.append((lo, hi, portion))
        if lo is None or lo < YOUNGEST_RELIABLE_AGE:
            flagged.append(len(per_bin) - 1)
    if label is None:
        text = str(source)
        label = Path(text).stem if "\n" not in text and text and Path(text).is_file() else "profile"
    return TailProfile(
        per_bin=tuple(per_bin), total_portion=None, label=label, flagged=tuple(flagged)
    )
