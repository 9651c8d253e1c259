"""Curve construction, smoothing, normalization, splines and peak estimation."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pidkit import curves, ingest
from pidkit.curves import MeanIncomeCurve
from pidkit.errors import DataValidationError, DomainError

from conftest import FIXTURES


def make_curve(values, x0=0.0, label="c"):
    pts = tuple((x0 + i, float(v)) for i, v in enumerate(values))
    return MeanIncomeCurve(label=label, points=pts)


# ------------------------------------------------------------------ age axis


def test_work_experience_conversion():
    assert curves.to_work_experience(52.5) == 38.5
    assert curves.to_work_experience(14) == 0
    assert curves.to_work_experience(64) == 50
    assert curves.to_age(38.5) == 52.5


def test_age_below_entry_rejected():
    with pytest.raises(DomainError, match="entry age"):
        curves.to_work_experience(13.9)


@given(st.floats(min_value=14, max_value=120, allow_nan=False))
def test_work_experience_roundtrip(age):
    assert curves.to_age(curves.to_work_experience(age)) == age


# ------------------------------------------------------------- construction


def test_bin_midpoints_and_open_bins():
    table = ingest.BinnedIncomeTable(
        "UK",
        2012,
        "GBP",
        (
            ingest.AgeBin(None, 19, 100.0, 5.0),
            ingest.AgeBin(20, 24, 100.0, 10.0),
            ingest.AgeBin(25, 29, 100.0, 12.0),
            ingest.AgeBin(30, 34, 0.0, 0.0),  # empty: dropped
            ingest.AgeBin(75, None, 100.0, 6.0),
        ),
    )
    curve = curves.bin_midpoint_curve(table)
    assert curve.points == ((2.0, 5.0), (8.0, 10.0), (13.0, 12.0), (66.0, 6.0))
    assert curve.illustrative == (0, 3)
    assert curve.solid_points() == ((8.0, 10.0), (13.0, 12.0))


def test_microdata_curve_takes_weighted_means():
    data = ingest.MicrodataSet(
        "US",
        1998,
        (
            (30, 10.0, 1.0),
            (30, 20.0, 3.0),
            (40, 5.0, 2.0),
        ),
    )
    curve = curves.mean_curve_from_microdata(data)
    assert curve.points == ((16.0, 17.5), (26.0, 5.0))


def test_curve_rejects_unsorted_points():
    with pytest.raises(DataValidationError, match="strictly increasing"):
        MeanIncomeCurve(label="bad", points=((2.0, 1.0), (1.0, 1.0)))


# ------------------------------------------------------------ moving average


def test_moving_average_window_must_be_odd():
    with pytest.raises(DomainError, match="odd"):
        curves.moving_average(make_curve([1, 2, 3]), 2)


def test_moving_average_needs_unit_spacing():
    curve = MeanIncomeCurve(label="c", points=((0.0, 1.0), (2.5, 1.0), (5.0, 1.0)))
    with pytest.raises(DomainError, match="one-year spacing"):
        curves.moving_average(curve, 3)


def test_moving_average_shrinks_symmetrically_at_edges():
    curve = make_curve([0, 0, 0, 9, 0, 0, 0])
    out = curves.moving_average(curve, 9)
    # full window never fits; centre uses width 7, ends pass through
    assert out.values()[0] == 0.0
    assert out.values()[3] == pytest.approx(9 / 7)
    assert out.values()[-1] == 0.0


@given(st.lists(st.integers(min_value=0, max_value=10**6), min_size=1, max_size=40))
def test_moving_average_window_one_is_identity(values):
    curve = make_curve(values)
    assert curves.moving_average(curve, 1).points == curve.points


@given(
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=2, max_value=30),
    st.sampled_from([3, 5, 7, 9]),
)
def test_moving_average_keeps_constant_curves(level, n, window):
    # integer levels keep every window mean exact in binary floats
    out = curves.moving_average(make_curve([level] * n), window)
    assert all(v == float(level) for _, v in out.points)


# -------------------------------------------------------------- normalization


def test_normalize_sets_max_to_one_exactly():
    out = curves.normalize_to_peak(make_curve([3, 7, 5]))
    assert max(v for _, v in out.points) == 1.0
    assert out.normalized


def test_normalize_all_zero_rejected():
    with pytest.raises(DomainError, match="no positive values"):
        curves.normalize_to_peak(make_curve([0, 0, 0]))


@given(
    st.lists(st.integers(min_value=0, max_value=10**9), min_size=2, max_size=40).filter(
        lambda vs: max(vs) > 0
    ),
    st.integers(min_value=-30, max_value=30),
)
def test_normalize_argmax_invariant_under_dyadic_scaling(values, exp):
    # powers of two scale exactly, so strict value order is preserved
    scale = 2.0**exp
    base = make_curve(values)
    scaled = make_curve([v * scale for v in values])
    norm_base = curves.normalize_to_peak(base).values()
    norm_scaled = curves.normalize_to_peak(scaled).values()
    assert norm_base.argmax() == norm_scaled.argmax()


def test_normalize_argmax_invariant_for_arbitrary_scale():
    values = [10, 80, 30, 80, 5]
    for scale in (0.3, 1.7, 977.5):
        scaled = curves.normalize_to_peak(make_curve([v * scale for v in values]))
        assert scaled.values().argmax() == 1


# -------------------------------------------------------------------- spline


def test_spline_grid_spans_support():
    dense = curves.spline_interpolate(make_curve([0, 1, 0]), grid_step=0.5)
    xs = [x for x, _ in dense.points]
    assert xs[0] == 0.0 and xs[-1] == 2.0
    assert len(xs) == 5


def test_spline_keeps_last_point_for_ragged_step():
    dense = curves.spline_interpolate(make_curve([0, 1, 0]), grid_step=0.75)
    xs = [x for x, _ in dense.points]
    assert xs[-1] == 2.0


def test_spline_clips_negative_undershoot():
    curve = make_curve([0, 0, 5, 0, 0])
    dense = curves.spline_interpolate(curve, grid_step=0.1)
    assert min(v for _, v in dense.points) >= 0.0


def test_spline_requires_three_points():
    with pytest.raises(DomainError, match="at least 3 points"):
        curves.spline_interpolate(make_curve([1, 2]))


def test_spline_step_must_be_positive():
    with pytest.raises(DomainError, match="grid_step"):
        curves.spline_interpolate(make_curve([1, 2, 3]), grid_step=0.0)


@given(
    st.lists(
        st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False),
        min_size=3,
        max_size=25,
    )
)
@settings(max_examples=60)
def test_spline_reproduces_input_points(values):
    curve = make_curve(values)
    dense = curves.spline_interpolate(curve, grid_step=1.0)
    got = dict(dense.points)
    for x, v in curve.points:
        assert got[x] == pytest.approx(v, rel=1e-9, abs=1e-9)


# ----------------------------------------------------------- peak estimation


def test_peak_of_symmetric_triangle_is_exact():
    curve = MeanIncomeCurve(label="tri", points=((10.0, 0.0), (20.0, 1.0), (30.0, 0.0)))
    est = curves.estimate_peak(curve)
    assert est.peak_work_exp == 20.0
    assert est.peak_age == 34.0
    assert est.bin_peak_work_exp == 20.0


def test_peak_grid_ties_resolve_to_smaller_work_exp():
    curve = make_curve([0, 1, 1, 0])
    est = curves.estimate_peak(curve, grid_step=1.0)
    assert est.peak_work_exp == 1.0


def test_peak_ignores_illustrative_points():
    # trailing open bin holds the largest raw value but must not win
    table = ingest.BinnedIncomeTable(
        "X",
        2000,
        "EUR",
        (
            ingest.AgeBin(20, 24, 10.0, 5.0),
            ingest.AgeBin(25, 29, 10.0, 8.0),
            ingest.AgeBin(30, 34, 10.0, 6.0),
            ingest.AgeBin(35, None, 10.0, 50.0),
        ),
    )
    est = curves.estimate_peak(curves.bin_midpoint_curve(table))
    assert est.peak_work_exp < 21.0


def test_peak_needs_three_solid_points():
    curve = MeanIncomeCurve(
        label="thin", points=((2.0, 1.0), (10.0, 2.0), (20.0, 1.5)), illustrative=(0,)
    )
    with pytest.raises(DomainError, match="needs 3"):
        curves.estimate_peak(curve)


def test_peak_age_offset_invariant():
    est = curves.estimate_peak(make_curve([1, 4, 2, 1], x0=10.0))
    assert est.peak_age - est.peak_work_exp == 14.0
    assert 10.0 <= est.peak_work_exp <= 13.0


def test_peak_invariant_under_scaling_and_normalization():
    curve = make_curve([2, 5, 9, 4, 1], x0=5.0)
    base = curves.estimate_peak(curve)
    scaled = curves.estimate_peak(make_curve([v * 3.25 for v in [2, 5, 9, 4, 1]], x0=5.0))
    normed = curves.estimate_peak(curves.normalize_to_peak(curve))
    assert abs(scaled.peak_work_exp - base.peak_work_exp) <= base.grid_step
    assert abs(normed.peak_work_exp - base.peak_work_exp) <= base.grid_step


# --------------------------------------------------------------- group shares


def test_group_share_peak_moves_between_2000_and_2003():
    tables = ingest.parse_binned_tables(FIXTURES / "uk_income_bins.csv")
    history = curves.group_share_history(tables)
    by_year = dict(zip(history.years, history.peak_midpoints))
    # work-experience bins 25-29 (midpoint 27) vs 30-34 (midpoint 32)
    assert by_year[2000] == 27.0
    assert by_year[2002] == 27.0
    assert by_year[2003] == 32.0
    assert by_year[2012] == 32.0


def test_group_shares_are_unit_peak_each_year():
    tables = ingest.parse_binned_tables(FIXTURES / "uk_income_bins.csv")
    history = curves.group_share_history(tables)
    for row in history.shares:
        assert max(row) == 1.0
        assert all(0 <= v <= 1 for v in row)


def test_group_share_identical_tables_are_flat():
    bins = (
        ingest.AgeBin(20, 24, 10.0, 5.0),
        ingest.AgeBin(25, 29, 10.0, 8.0),
    )
    tables = [
        ingest.BinnedIncomeTable("X", year, "EUR", bins) for year in (2000, 2001, 2002)
    ]
    history = curves.group_share_history(tables)
    assert history.peak_midpoints == (13.0, 13.0, 13.0)
    assert history.shares[0] == history.shares[1] == history.shares[2]


def test_group_share_detects_constructed_switch():
    def table(year, means):
        bins = tuple(
            ingest.AgeBin(20 + 5 * i, 24 + 5 * i, 10.0, m) for i, m in enumerate(means)
        )
        return ingest.BinnedIncomeTable("X", year, "EUR", bins)

    tables = [table(2000, [9, 5, 1]), table(2001, [6, 7, 2]), table(2002, [3, 9, 4])]
    history = curves.group_share_history(tables)
    assert history.peak_midpoints == (8.0, 13.0, 13.0)


def test_group_share_layout_mismatch_rejected():
    t1 = ingest.BinnedIncomeTable("X", 2000, "EUR", (ingest.AgeBin(20, 24, 1.0, 1.0),))
    t2 = ingest.BinnedIncomeTable("X", 2001, "EUR", (ingest.AgeBin(20, 29, 1.0, 1.0),))
    with pytest.raises(DataValidationError, match="different bin layout"):
        curves.group_share_history([t1, t2])


# ----------------------------------------------------------------- curve csv


def test_curve_csv_round_trip(curve_library):
    curve = curve_library[1992]
    text = curves.curve_csv_text(curve)
    again = curves.parse_curve_csv(text, label=curve.label)
    assert again == curve


def test_curve_csv_label_defaults_to_stem():
    curve = curves.parse_curve_csv(FIXTURES / "us_curves" / "us_1992.csv")
    assert curve.label == "us_1992"
    assert curve.normalized


def test_curve_csv_flag_must_be_constant():
    text = "work_exp,value,normalized\n1,0.5,true\n2,1,false\n"
    with pytest.raises(DataValidationError, match="not constant"):
        curves.parse_curve_csv(text)
