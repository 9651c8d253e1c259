"""Parsing and validation of the input table formats.

Four core inputs share a per-row country column so that one file can
carry several countries or survey years:

* GDP per capita series:        country,year,gdp_pc
* population series:            country,year,total_pop,working_age_pop
* binned income tables:         country,year,currency,age_lo,age_hi,persons,mean_income
* income microdata:             country,year,age,income,weight

A fifth format holds two-dimensional age x income-bracket counts used
for tail analysis:

* income distribution tables:   country,year,currency,age_lo,age_hi,income_lo,income_hi,persons

Empty ``age_hi`` (or ``income_hi``) cells mark open-ended brackets. An
empty ``age_lo`` on the first bin marks an open lower bracket such as
"under 20".
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import _csvio
from .errors import DataValidationError

GDP_HEADER = ["country", "year", "gdp_pc"]
POP_HEADER = ["country", "year", "total_pop", "working_age_pop"]
BINS_HEADER = ["country", "year", "currency", "age_lo", "age_hi", "persons", "mean_income"]
MICRO_HEADER = ["country", "year", "age", "income", "weight"]
DIST_HEADER = ["country", "year", "currency", "age_lo", "age_hi", "income_lo", "income_hi", "persons"]


@dataclass(frozen=True)
class GdpSeries:
    """GDP per capita per calendar year for one country."""

    country: str
    points: tuple[tuple[int, float], ...]  # (year, gdp_pc), year ascending

    def __post_init__(self):
        if not self.country:
            raise DataValidationError("country must be non-empty")
        if len(self.points) < 2:
            raise DataValidationError(f"series {self.country!r} needs at least 2 points")
        years = [y for y, _ in self.points]
        if years != sorted(set(years)):
            raise DataValidationError(f"series {self.country!r} has duplicate or unsorted years")
        for y, g in self.points:
            if g <= 0:
                raise DataValidationError(f"gdp_pc must be positive, got {g} in {y}")

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(y for y, _ in self.points)

    def level(self, year: int) -> float:
        for y, g in self.points:
            if y == year:
                return g
        raise DataValidationError(f"series {self.country!r} has no year {year}")


@dataclass(frozen=True)
class PopulationSeries:
    """Total and working-age population per calendar year for one country."""

    country: str
    points: tuple[tuple[int, float, float], ...]  # (year, total, working_age)

    def __post_init__(self):
        if not self.country:
            raise DataValidationError("country must be non-empty")
        if not self.points:
            raise DataValidationError("population series is empty")
        years = [y for y, _, _ in self.points]
        if years != sorted(set(years)):
            raise DataValidationError(f"series {self.country!r} has duplicate or unsorted years")
        for y, total, working in self.points:
            if working <= 0:
                raise DataValidationError(f"working_age_pop must be positive, got {working} in {y}")
            if total < working:
                raise DataValidationError(f"total_pop {total} below working_age_pop {working} in {y}")

    def ratio(self, year: int) -> float:
        """total_pop / working_age_pop for one year."""
        for y, total, working in self.points:
            if y == year:
                return total / working
        raise DataValidationError(f"population series {self.country!r} has no year {year}")


@dataclass(frozen=True)
class AgeBin:
    """One age bracket of a binned income table.

    ``age_lo is None`` marks an open lower bracket ("under 20");
    ``age_hi is None`` marks an open upper bracket ("75 and over").
    Bounds are inclusive years of age.
    """

    age_lo: int | None
    age_hi: int | None
    persons: float
    mean_income: float

    def sort_key(self) -> float:
        return -1.0 if self.age_lo is None else float(self.age_lo)


@dataclass(frozen=True)
class BinnedIncomeTable:
    """Mean income by age bracket for one country and survey year."""

    country: str
    year: int
    currency: str
    bins: tuple[AgeBin, ...]

    def __post_init__(self):
        if not self.bins:
            raise DataValidationError(f"{self.country} {self.year}: table has no bins")
        object.__setattr__(self, "bins", tuple(sorted(self.bins, key=AgeBin.sort_key)))
        self._check_layout()

    def _check_layout(self):
        bins = self.bins
        where = f"{self.country} {self.year}"
        for i, b in enumerate(bins):
            if b.age_lo is None and i != 0:
                raise DataValidationError(f"{where}: open lower bracket must come first")
            if b.age_hi is None and i != len(bins) - 1:
                raise DataValidationError(f"{where}: open upper bracket must come last")
            if b.age_lo is not None and b.age_hi is not None and b.age_hi < b.age_lo:
                raise DataValidationError(f"{where}: bin {b.age_lo}-{b.age_hi} has hi < lo")
            if b.persons < 0:
                raise DataValidationError(f"{where}: negative persons in bin starting {b.age_lo}")
            if b.mean_income < 0:
                raise DataValidationError(f"{where}: negative mean income in bin starting {b.age_lo}")
            if b.persons == 0 and b.mean_income != 0:
                raise DataValidationError(
                    f"{where}: empty bin starting {b.age_lo} must have mean income 0"
                )
        for prev, cur in zip(bins, bins[1:]):
            prev_hi = prev.age_hi if prev.age_hi is not None else float("inf")
            cur_lo = cur.age_lo if cur.age_lo is not None else float("-inf")
            if cur_lo <= prev_hi:
                raise DataValidationError(f"{where}: overlapping bins at age {cur.age_lo}")

    @property
    def empty_bins(self) -> tuple[int, ...]:
        """Indices of zero-person bins, kept but unusable as curve points."""
        return tuple(i for i, b in enumerate(self.bins) if b.persons == 0)

    def layout(self) -> tuple[tuple[int | None, int | None], ...]:
        return tuple((b.age_lo, b.age_hi) for b in self.bins)


@dataclass(frozen=True)
class MicrodataSet:
    """Individual (age, income, weight) records for one country and year."""

    country: str
    year: int
    records: tuple[tuple[int, float, float], ...]

    def __post_init__(self):
        if not self.records:
            raise DataValidationError(f"{self.country} {self.year}: no microdata records")
        for age, income, weight in self.records:
            if age < 15:
                raise DataValidationError(f"age below 15: {age}")
            if income < 0:
                raise DataValidationError(f"negative income: {income}")
            if weight <= 0:
                raise DataValidationError(f"weight must be positive, got {weight}")

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class DistBin:
    """One (age bracket, income bracket) cell of a distribution table."""

    age_lo: int | None
    age_hi: int | None
    income_lo: float
    income_hi: float | None  # None marks the open top bracket
    persons: float


@dataclass(frozen=True)
class IncomeDistributionTable:
    """Person counts over an age x income-bracket grid for one year.

    Every age bracket must carry the same income brackets, so the table
    is a complete grid. Income brackets are half-open [lo, hi).
    """

    country: str
    year: int
    currency: str
    cells: tuple[DistBin, ...]

    def __post_init__(self):
        if not self.cells:
            raise DataValidationError(f"{self.country} {self.year}: distribution has no cells")
        self._check_grid()

    def _check_grid(self):
        where = f"{self.country} {self.year}"
        layouts = {}
        for c in self.cells:
            if c.persons < 0:
                raise DataValidationError(f"{where}: negative persons")
            if c.income_lo < 0:
                raise DataValidationError(f"{where}: negative income bracket edge")
            if c.income_hi is not None and c.income_hi <= c.income_lo:
                raise DataValidationError(f"{where}: income bracket {c.income_lo}-{c.income_hi} has hi <= lo")
            layouts.setdefault((c.age_lo, c.age_hi), []).append((c.income_lo, c.income_hi))
        reference = None
        for age_key, brackets in layouts.items():
            brackets = sorted(brackets, key=lambda b: b[0])
            for (lo1, hi1), (lo2, _) in zip(brackets, brackets[1:]):
                if hi1 is None or lo2 < hi1:
                    raise DataValidationError(f"{where}: overlapping income brackets in age {age_key}")
            if reference is None:
                reference = brackets
            elif brackets != reference:
                raise DataValidationError(f"{where}: age {age_key} has a different income bracket layout")
        if reference[-1][1] is not None:
            raise DataValidationError(f"{where}: top income bracket must be open-ended")

    def age_layout(self) -> tuple[tuple[int | None, int | None], ...]:
        keys = {(c.age_lo, c.age_hi) for c in self.cells}
        return tuple(sorted(keys, key=lambda k: -1.0 if k[0] is None else float(k[0])))

    def income_edges(self) -> tuple[float, ...]:
        """Ascending lower edges of the income brackets."""
        return tuple(sorted({c.income_lo for c in self.cells}))


# ---------------------------------------------------------------------------
# parsers


def _gdp_row(rec: dict[str, str], i: int) -> tuple[int, float]:
    year = _csvio.parse_int(rec["year"], "year", i)
    gdp = _csvio.parse_float(rec["gdp_pc"], "gdp_pc", i)
    if gdp <= 0:
        raise DataValidationError(f"gdp_pc must be positive, got {gdp}", row=i)
    return year, gdp


def parse_gdp_series(source: str | Path, country: str | None = None) -> GdpSeries:
    """Parse a GDP per capita CSV into a single-country series.

    ``country`` filters a multi-country file; a file with several
    countries and no filter is rejected.
    """
    rows = _csvio.read_rows(source, GDP_HEADER)
    rows = _filter_country(rows, country, "gdp")
    points = [_gdp_row(rec, i) for i, rec in rows]
    seen = {}
    for year, _ in points:
        seen[year] = seen.get(year, 0) + 1
    dupes = [y for y, n in seen.items() if n > 1]
    if dupes:
        raise DataValidationError(f"duplicate year(s) {sorted(dupes)} in gdp series")
    points.sort()
    return GdpSeries(country=rows[0][1]["country"], points=tuple(points))


def _population_row(rec: dict[str, str], i: int) -> tuple[int, float, float]:
    year = _csvio.parse_int(rec["year"], "year", i)
    total = _csvio.parse_float(rec["total_pop"], "total_pop", i)
    working = _csvio.parse_float(rec["working_age_pop"], "working_age_pop", i)
    if working <= 0:
        raise DataValidationError(f"working_age_pop must be positive, got {working}", row=i)
    if total < working:
        raise DataValidationError(f"total_pop {total} below working_age_pop {working}", row=i)
    return year, total, working


def parse_population_series(source: str | Path, country: str | None = None) -> PopulationSeries:
    """Parse a population CSV into a single-country series."""
    rows = _csvio.read_rows(source, POP_HEADER)
    rows = _filter_country(rows, country, "population")
    points = [_population_row(rec, i) for i, rec in rows]
    years = [p[0] for p in points]
    if len(set(years)) != len(years):
        raise DataValidationError("duplicate years in population series")
    points.sort()
    return PopulationSeries(country=rows[0][1]["country"], points=tuple(points))


def _bin_row(rec: dict[str, str], i: int) -> tuple[int, str, AgeBin]:
    year = _csvio.parse_int(rec["year"], "year", i)
    if not rec["currency"]:
        raise DataValidationError("currency must be non-empty", row=i)
    age_lo = None if rec["age_lo"] == "" else _csvio.parse_int(rec["age_lo"], "age_lo", i)
    age_hi = None if rec["age_hi"] == "" else _csvio.parse_int(rec["age_hi"], "age_hi", i)
    if age_lo is None and age_hi is None:
        raise DataValidationError("bin cannot be open at both ends", row=i)
    persons = _csvio.parse_float(rec["persons"], "persons", i)
    mean_income = _csvio.parse_float(rec["mean_income"], "mean_income", i)
    if persons < 0:
        raise DataValidationError(f"negative persons: {persons}", row=i)
    if mean_income < 0:
        raise DataValidationError(f"negative mean income: {mean_income}", row=i)
    return year, rec["currency"], AgeBin(age_lo, age_hi, persons, mean_income)


def parse_binned_tables(source: str | Path, country: str | None = None) -> list[BinnedIncomeTable]:
    """Parse a binned income CSV into one table per (country, year), year ascending."""
    rows = _csvio.read_rows(source, BINS_HEADER)
    rows = _filter_country(rows, country, "income table")
    groups: dict[tuple[str, int, str], list[AgeBin]] = {}
    for i, rec in rows:
        year, currency, age_bin = _bin_row(rec, i)
        groups.setdefault((rec["country"], year, currency), []).append(age_bin)
    tables = [
        BinnedIncomeTable(country=c, year=y, currency=cur, bins=tuple(bins))
        for (c, y, cur), bins in groups.items()
    ]
    tables.sort(key=lambda t: (t.country, t.year))
    return tables


def parse_binned_table(
    source: str | Path, country: str | None = None, year: int | None = None
) -> BinnedIncomeTable:
    """Parse a binned income CSV expecting exactly one (country, year) table."""
    tables = parse_binned_tables(source, country)
    if year is not None:
        tables = [t for t in tables if t.year == year]
    if not tables:
        raise DataValidationError(f"no income table for country={country} year={year}")
    if len(tables) > 1:
        found = ", ".join(f"{t.country} {t.year}" for t in tables)
        raise DataValidationError(f"expected one income table, found several: {found}")
    return tables[0]


def _micro_row(rec: dict[str, str], i: int) -> tuple[int, float, float]:
    age = _csvio.parse_int(rec["age"], "age", i)
    income = _csvio.parse_float(rec["income"], "income", i)
    weight = _csvio.parse_float(rec["weight"], "weight", i)
    if age < 15:
        raise DataValidationError(f"age below 15: {age}", row=i)
    if income < 0:
        raise DataValidationError(f"negative income: {income}", row=i)
    if weight <= 0:
        raise DataValidationError(f"weight must be positive, got {weight}", row=i)
    return age, income, weight


def parse_microdata(
    source: str | Path, country: str | None = None, year: int | None = None
) -> MicrodataSet:
    """Parse an income microdata CSV for one country and survey year."""
    rows = _csvio.read_rows(source, MICRO_HEADER)
    rows = _filter_country(rows, country, "microdata")
    if year is not None:
        rows = [(i, r) for i, r in rows if r["year"] == str(year)]
        if not rows:
            raise DataValidationError(f"no microdata rows for year {year}")
    years = {r["year"] for _, r in rows}
    if len(years) > 1:
        raise DataValidationError(
            f"microdata mixes years {sorted(years)}; pass an explicit year"
        )
    records = [_micro_row(rec, i) for i, rec in rows]
    return MicrodataSet(
        country=rows[0][1]["country"], year=int(rows[0][1]["year"]), records=tuple(records)
    )


def _dist_row(rec: dict[str, str], i: int) -> tuple[int, str, DistBin]:
    year = _csvio.parse_int(rec["year"], "year", i)
    if not rec["currency"]:
        raise DataValidationError("currency must be non-empty", row=i)
    age_lo = None if rec["age_lo"] == "" else _csvio.parse_int(rec["age_lo"], "age_lo", i)
    age_hi = None if rec["age_hi"] == "" else _csvio.parse_int(rec["age_hi"], "age_hi", i)
    if age_lo is None and age_hi is None:
        raise DataValidationError("age bracket cannot be open at both ends", row=i)
    income_lo = _csvio.parse_float(rec["income_lo"], "income_lo", i)
    income_hi = None if rec["income_hi"] == "" else _csvio.parse_float(rec["income_hi"], "income_hi", i)
    persons = _csvio.parse_float(rec["persons"], "persons", i)
    if persons < 0:
        raise DataValidationError(f"negative persons: {persons}", row=i)
    return year, rec["currency"], DistBin(age_lo, age_hi, income_lo, income_hi, persons)


def parse_distribution_tables(
    source: str | Path, country: str | None = None
) -> list[IncomeDistributionTable]:
    """Parse an age x income-bracket distribution CSV, one table per (country, year)."""
    rows = _csvio.read_rows(source, DIST_HEADER)
    rows = _filter_country(rows, country, "distribution table")
    groups: dict[tuple[str, int, str], list[DistBin]] = {}
    for i, rec in rows:
        year, currency, cell = _dist_row(rec, i)
        groups.setdefault((rec["country"], year, currency), []).append(cell)
    tables = [
        IncomeDistributionTable(country=c, year=y, currency=cur, cells=tuple(cells))
        for (c, y, cur), cells in groups.items()
    ]
    tables.sort(key=lambda t: (t.country, t.year))
    return tables


def parse_distribution_table(
    source: str | Path, country: str | None = None, year: int | None = None
) -> IncomeDistributionTable:
    """Parse a distribution CSV expecting exactly one (country, year) table."""
    tables = parse_distribution_tables(source, country)
    if year is not None:
        tables = [t for t in tables if t.year == year]
    if not tables:
        raise DataValidationError(f"no distribution table for country={country} year={year}")
    if len(tables) > 1:
        found = ", ".join(f"{t.country} {t.year}" for t in tables)
        raise DataValidationError(f"expected one distribution table, found several: {found}")
    return tables[0]


def _filter_country(rows, country: str | None, what: str):
    if country is not None:
        rows = [(i, r) for i, r in rows if r["country"] == country]
        if not rows:
            raise DataValidationError(f"no {what} rows for country {country!r}")
        return rows
    countries = {r["country"] for _, r in rows}
    if len(countries) > 1:
        raise DataValidationError(
            f"{what} mixes countries {sorted(countries)}; pass an explicit country"
        )
    return rows


# ---------------------------------------------------------------------------
# working-age correction


def correct_gdp_for_working_age(gdp: GdpSeries, population: PopulationSeries) -> GdpSeries:
    """Rescale GDP per capita to GDP per working-age person.

    Each observation is multiplied by total_pop / working_age_pop for
    its year. Every GDP year must be covered by the population series.
    """
    corrected = []
    for year, level in gdp.points:
        corrected.append((year, level * population.ratio(year)))
    return GdpSeries(country=gdp.country, points=tuple(corrected))


# ---------------------------------------------------------------------------
# canonical serialization


def format_number(value: float) -> str:
    """Integer-valued floats print without a decimal point."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def gdp_csv_text(series: GdpSeries) -> str:
    lines = [",".join(GDP_HEADER)]
    for year, gdp in series.points:
        lines.append(f"{series.country},{year},{format_number(gdp)}")
    return "\n".join(lines) + "\n"


def population_csv_text(series: PopulationSeries) -> str:
    lines = [",".join(POP_HEADER)]
    for year, total, working in series.points:
        lines.append(f"{series.country},{year},{format_number(total)},{format_number(working)}")
    return "\n".join(lines) + "\n"


def binned_csv_text(tables: list[BinnedIncomeTable] | BinnedIncomeTable) -> str:
    if isinstance(tables, BinnedIncomeTable):
        tables = [tables]
    lines = [",".join(BINS_HEADER)]
    for t in tables:
        for b in t.bins:
            lo = "" if b.age_lo is None else str(b.age_lo)
            hi = "" if b.age_hi is None else str(b.age_hi)
            lines.append(
                f"{t.country},{t.year},{t.currency},{lo},{hi},"
                f"{format_number(b.persons)},{format_number(b.mean_income)}"
            )
    return "\n".join(lines) + "\n"


def microdata_csv_text(data: MicrodataSet) -> str:
    lines = [",".join(MICRO_HEADER)]
    for age, income, weight in data.records:
        lines.append(
            f"{data.country},{data.year},{age},{format_number(income)},{format_number(weight)}"
        )
    return "\n".join(lines) + "\n"


def distribution_csv_text(table: IncomeDistributionTable) -> str:
    lines = [",".join(DIST_HEADER)]
    cells = sorted(
        table.cells,
        key=lambda c: (-1.0 if c.age_lo is None else float(c.age_lo), c.income_lo),
    )
    for c in cells:
        age_lo = "" if c.age_lo is None else str(c.age_lo)
        age_hi = "" if c.age_hi is None else str(c.age_hi)
        hi = "" if c.income_hi is None else format_number(c.income_hi)
        lines.append(
            f"{table.country},{table.year},{table.currency},{age_lo},{age_hi},"
            f"{format_number(c.income_lo)},{hi},{format_number(c.persons)}"
        )
    return "\n".join(lines) + "\n"


_SCHEMAS = {
    "gdp": (GDP_HEADER, _gdp_row, parse_gdp_series),
    "population": (POP_HEADER, _population_row, parse_population_series),
    "income_bins": (BINS_HEADER, _bin_row, parse_binned_tables),
    "microdata": (MICRO_HEADER, _micro_row, parse_microdata),
    "distribution": (DIST_HEADER, _dist_row, parse_distribution_tables),
}


def collect_diagnostics(kind: str, source: str | Path) -> list[str]:
    """Validate a file against a named schema, returning human-readable problems.

    ``kind`` is one of gdp, population, income_bins, microdata,
    distribution. Row-level violations are all collected with their row
    numbers instead of stopping at the first; an empty list means the
    file parses cleanly.
    """
    if kind not in _SCHEMAS:
        raise DataValidationError(f"unknown input kind {kind!r}: expected one of {sorted(_SCHEMAS)}")
    header, row_check, full_parse = _SCHEMAS[kind]
    try:
        rows = _csvio.read_rows(source, header)
    except DataValidationError as exc:
        return [str(exc)]
    problems = []
    for i, rec in rows:
        try:
            row_check(rec, i)
        except DataValidationError as exc:
            problems.append(str(exc))
    if not problems:
        # Rows are individually fine; surface cross-row problems such as
        # duplicate years or overlapping bins.
        try:
            full_parse(source)
        except DataValidationError as exc:
            problems.append(str(exc))
    return problems
