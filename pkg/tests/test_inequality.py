"""Weighted Gini and age-resolved tail portions."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pidkit import inequality, ingest
from pidkit.errors import DataValidationError, DomainError

from conftest import FIXTURES


def micro(rows):
    return ingest.MicrodataSet("X", 2000, tuple(rows))


def pairwise_gini(incomes, weights):
    """O(n^2) oracle: mean absolute pairwise difference over twice the mean."""
    x = np.asarray(incomes, dtype=float)
    w = np.asarray(weights, dtype=float)
    num = 0.0
    for i in range(len(x)):
        num += float(np.sum(w[i] * w * np.abs(x[i] - x)))
    return num / (2.0 * w.sum() * float(np.dot(w, x)))


# ---------------------------------------------------------------------- gini


def test_gini_perfect_equality_is_zero():
    data = micro([(20, 5.0, 1.0), (30, 5.0, 2.0), (40, 5.0, 0.5)])
    assert inequality.gini(data) == 0.0


def test_gini_two_persons_closed_form():
    data = micro([(20, 0.0, 1.0), (30, 7.0, 1.0)])
    assert inequality.gini(data) == pytest.approx(0.5, abs=1e-15)


def test_gini_matches_pairwise_oracle_on_random_records():
    rng = np.random.default_rng(11)
    incomes = rng.integers(0, 10**6, size=200).astype(float)
    weights = rng.integers(1, 50, size=200).astype(float)
    data = micro([(20, float(x), float(w)) for x, w in zip(incomes, weights)])
    assert inequality.gini(data) == pytest.approx(
        pairwise_gini(incomes, weights), abs=1e-12
    )


def test_gini_all_zero_incomes_rejected():
    with pytest.raises(DomainError, match="undefined"):
        inequality.gini(micro([(20, 0.0, 1.0), (30, 0.0, 1.0)]))


@given(
    st.lists(
        st.tuples(
            st.integers(min_value=0, max_value=10**6),
            st.integers(min_value=1, max_value=20),
        ),
        min_size=2,
        max_size=60,
    ).filter(lambda rows: any(x > 0 for x, _ in rows))
)
@settings(max_examples=60)
def test_gini_scale_and_replication_invariance(rows):
    # integer incomes and weights keep all partial sums exact, so both
    # invariances hold to the last bit
    data = micro([(20, float(x), float(w)) for x, w in rows])
    doubled = micro([(20, 2.0 * x, float(w)) for x, w in rows])
    replicated = micro([(20, float(x), float(w)) for x, w in rows] * 2)
    g = inequality.gini(data)
    assert inequality.gini(doubled) == g
    assert inequality.gini(replicated) == g
    assert 0.0 <= g < 1.0


# ------------------------------------------------------------- tail profiles


def bins_table(year, counts, means=None):
    layout = [(0, 24), (25, 34), (35, 44), (45, 54), (55, None)]
    means = means or [1.0 if c else 0.0 for c in counts]
    return ingest.BinnedIncomeTable(
        "CA",
        year,
        "CAD",
        tuple(
            ingest.AgeBin(lo, hi, float(c), float(m))
            for (lo, hi), c, m in zip(layout, counts, means)
        ),
    )


def test_tail_by_age_portions_and_total():
    above = bins_table(2000, [1, 5, 10, 20, 4])
    population = bins_table(2000, [100, 100, 100, 100, 100])
    profile = inequality.tail_portion_by_age(above, population, 100000.0)
    assert profile.portions().tolist() == [0.01, 0.05, 0.10, 0.20, 0.04]
    assert profile.total_portion == pytest.approx(40 / 500)
    assert profile.argmax_bin() == (45, 54)
    assert profile.flagged == (0,)  # reaches below age 15


def test_tail_by_age_count_above_population_rejected():
    above = bins_table(2000, [101, 0, 0, 0, 0])
    population = bins_table(2000, [100, 100, 100, 100, 100])
    with pytest.raises(DataValidationError, match="exceeds population"):
        inequality.tail_portion_by_age(above, population, 100000.0)


def test_tail_by_age_layout_mismatch_rejected():
    above = bins_table(2000, [1, 1, 1, 1, 1])
    other = ingest.BinnedIncomeTable(
        "CA", 2000, "CAD", (ingest.AgeBin(0, 54, 10.0, 1.0), ingest.AgeBin(55, None, 1.0, 1.0))
    )
    with pytest.raises(DataValidationError, match="different bracket layouts"):
        inequality.tail_portion_by_age(above, other, 100000.0)


def test_tail_profile_threshold_must_hit_an_edge():
    table = ingest.parse_distribution_table(FIXTURES / "canada_distribution.csv", year=2000)
    with pytest.raises(DomainError, match="not a bracket edge"):
        inequality.tail_profile(table, 120000.0)


def test_tail_profile_total_matches_per_bin_recombination():
    table = ingest.parse_distribution_table(FIXTURES / "canada_distribution.csv", year=2006)
    profile = inequality.tail_profile(table, 100000.0)
    pops = []
    for age_lo, age_hi in table.age_layout():
        pops.append(sum(c.persons for c in table.cells if (c.age_lo, c.age_hi) == (age_lo, age_hi)))
    recombined = float(np.dot(profile.portions(), pops) / np.sum(pops))
    assert profile.total_portion == pytest.approx(recombined, abs=1e-12)


def test_tail_profile_threshold_above_everything_gives_zero():
    text = (
        "country,year,currency,age_lo,age_hi,income_lo,income_hi,persons\n"
        "CA,2000,CAD,20,54,0,50000,80\n"
        "CA,2000,CAD,20,54,50000,,0\n"
        "CA,2000,CAD,55,,0,50000,20\n"
        "CA,2000,CAD,55,,50000,,0\n"
    )
    table = ingest.parse_distribution_table(text)
    profile = inequality.tail_profile(table, 50000.0)
    assert profile.portions().tolist() == [0.0, 0.0]
    assert profile.total_portion == 0.0


# ---------------------------------------------------------------- calibration


def test_calibrate_canada_2013_target():
    table = ingest.parse_distribution_table(FIXTURES / "canada_distribution.csv", year=2013)
    result = inequality.calibrate_threshold(table, 0.027)
    assert result.threshold == 150000.0
    assert result.warning is None


def test_calibrate_target_one_returns_lowest_edge():
    table = ingest.parse_distribution_table(FIXTURES / "canada_distribution.csv", year=2000)
    result = inequality.calibrate_threshold(table, 1.0, max_gap=1.0)
    assert result.threshold == min(table.income_edges())
    assert result.achieved_portion == 1.0


def test_calibrate_far_target_carries_warning():
    table = ingest.parse_distribution_table(FIXTURES / "canada_distribution.csv", year=2000)
    result = inequality.calibrate_threshold(table, 0.40)
    assert result.warning is not None


def test_calibrate_rejects_bad_target():
    table = ingest.parse_distribution_table(FIXTURES / "canada_distribution.csv", year=2000)
    with pytest.raises(DomainError, match="target portion"):
        inequality.calibrate_threshold(table, 0.0)


def test_tail_portion_weakly_decreasing_in_threshold():
    table = ingest.parse_distribution_table(FIXTURES / "canada_distribution.csv", year=2000)
    totals = [inequality.tail_profile(table, edge).total_portion for edge in table.income_edges()]
    assert all(a >= b for a, b in zip(totals, totals[1:]))


# -------------------------------------------------------------- normalization


def test_peak_normalize_simple_portions():
    profile = inequality.TailProfile(
        per_bin=((20, 29, 0.01), (30, 39, 0.04), (40, 49, 0.02)),
        total_portion=None,
        label="p",
    )
    normed = inequality.peak_normalize_profile(profile)
    assert [p for _, _, p in normed.per_bin] == [0.25, 1.0, 0.5]
    assert normed.normalized
    assert normed.argmax_bin() == profile.argmax_bin()


def test_peak_normalize_all_zero_rejected():
    profile = inequality.TailProfile(
        per_bin=((20, 29, 0.0), (30, 39, 0.0)), total_portion=None, label="z"
    )
    with pytest.raises(DomainError, match="no positive portions"):
        inequality.peak_normalize_profile(profile)


def test_profile_serialization_names_peak_bin():
    profile = inequality.TailProfile(
        per_bin=((20, 29, 0.01), (30, 39, 0.04)), total_portion=0.02, threshold=1000.0, label="p"
    )
    payload = profile.to_dict()
    assert payload["peak_bin"] == [30, 39]
    assert payload["threshold"] == 1000.0
    assert payload["total_portion"] == 0.02


def test_profile_csv_round_trip():
    profile = inequality.TailProfile(
        per_bin=((None, 24, 0.0125), (25, 34, 0.04), (75, None, 0.01)),
        total_portion=0.021,
        threshold=100000.0,
        label="ca",
    )
    text = inequality.profile_csv_text(profile)
    again = inequality.parse_tail_profile(text, label="ca")
    assert again.per_bin == profile.per_bin
    assert again.total_portion is None  # per-bracket CSV carries no totals
    assert again.flagged == (0,)
