from datetime import date

import numpy as np
import pytest

from simplexproj.errors import EmptyPanel, NonPositivePrice, ParseError, ValidationError
from simplexproj.ingestion import (
    EveryKRows,
    ExplicitBreakpoints,
    MonthlyCalendar,
    PriceSeries,
    build_return_panel,
    load_breakpoints,
    load_prices,
    parse_period,
    read_returns_csv,
    write_returns_csv,
)

D = date.fromisoformat


def write(tmp_path, text, name="p.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_long_csv_two_rows(tmp_path):
    ps = load_prices(write(tmp_path, "asset_id,date,close\nA,2020-01-01,100\nA,2020-02-01,110\n"))
    assert len(ps) == 1
    s = ps[0]
    assert s.asset_id == "A"
    assert s.observations == [(D("2020-01-01"), 100.0), (D("2020-02-01"), 110.0)]


def test_wide_csv_blank_cell(tmp_path):
    text = "date,A,B\n2020-01-01,100,50\n2020-01-02,,51\n2020-01-03,102,52\n"
    ps = load_prices(write(tmp_path, text), "wide_csv").by_id()
    assert ps["A"].dates == (D("2020-01-01"), D("2020-01-03"))
    assert len(ps["B"]) == 3


def test_non_positive_price(tmp_path):
    with pytest.raises(NonPositivePrice):
        load_prices(write(tmp_path, "asset_id,date,close\nA,2020-01-01,-5\n"))
    with pytest.raises(NonPositivePrice):
        load_prices(write(tmp_path, "date,A\n2020-01-01,0\n"), "wide_csv")


def test_parse_errors_carry_row(tmp_path):
    with pytest.raises(ParseError) as e:
        load_prices(write(tmp_path, "asset_id,date,close\nA,2020-01-01,100\nA,2020-13-01,100\n"))
    assert e.value.row == 3
    with pytest.raises(ParseError) as e:
        load_prices(write(tmp_path, "asset_id,date,close\nA,2020-01-01,abc\n"))
    assert e.value.row == 2
    with pytest.raises(ParseError):
        load_prices(write(tmp_path, "sym,day,px\nA,2020-01-01,1\n"))
    with pytest.raises(ParseError):
        load_prices(write(tmp_path, ""))


def test_duplicates_and_unsorted(tmp_path):
    text = "asset_id,date,close\nA,2020-01-03,3\nA,2020-01-01,1\nA,2020-01-03,4\nB,2020-01-01,9\n"
    ps = load_prices(write(tmp_path, text))
    a = ps.by_id()["A"]
    assert a.dates == (D("2020-01-01"), D("2020-01-03"))
    assert a.prices == (1.0, 4.0)
    assert ps.unsorted_fixed == 1
    assert ps.duplicates_dropped == 1


def series(asset, pairs):
    return PriceSeries(asset, tuple(D(d) for d, _ in pairs), tuple(p for _, p in pairs))


def test_boundary_sampling_returns():
    s = series("A", [("2020-01-01", 100.0), ("2020-02-01", 110.0), ("2020-03-01", 99.0)])
    panel, excluded = build_return_panel([s], D("2020-01-01"), D("2020-03-01"), EveryKRows(1))
    assert excluded == []
    np.testing.assert_allclose(panel.returns[:, 0], [0.10, -0.10])
    assert panel.periods == (D("2020-02-01"), D("2020-03-01"))
    assert panel.start == D("2020-01-01")


def test_last_price_at_or_before_boundary():
    s = series("A", [("2020-01-01", 100.0), ("2020-01-20", 120.0), ("2020-02-10", 90.0), ("2020-03-02", 99.0)])
    panel, _ = build_return_panel([s], D("2020-01-05"), D("2020-03-31"), MonthlyCalendar())
    assert panel.periods == (D("2020-01-31"), D("2020-02-29"), D("2020-03-31"))
    np.testing.assert_allclose(panel.returns[:, 0], [120 / 100 - 1, 90 / 120 - 1, 99 / 90 - 1])


def test_late_listing_excluded():
    a = series("A", [(f"2020-0{m}-01", 100.0 + m) for m in range(1, 6)])
    b = series("B", [(f"2020-0{m}-01", 50.0 + m) for m in range(3, 6)])
    panel, excluded = build_return_panel([a, b], D("2020-01-01"), D("2020-05-01"), EveryKRows(1))
    assert excluded == ["B"]
    assert panel.asset_ids == ("A",)
    assert panel.n_periods == 4
    # partial coverage allowed: the panel starts once both assets trade
    panel, excluded = build_return_panel([a, b], D("2020-01-01"), D("2020-05-01"), EveryKRows(1), 0.5)
    assert excluded == []
    assert panel.start == D("2020-03-01")
    assert panel.n_periods == 2


def test_breakpoints_equal_every_row():
    dates = ["2020-01-01", "2020-01-08", "2020-01-15", "2020-01-22"]
    a = series("A", list(zip(dates, [10.0, 11.0, 10.5, 12.0])))
    b = series("B", list(zip(dates, [20.0, 19.0, 21.0, 22.0])))
    p1, _ = build_return_panel([a, b], D(dates[0]), D(dates[-1]), EveryKRows(1))
    p2, _ = build_return_panel([a, b], D(dates[0]), D(dates[-1]), ExplicitBreakpoints(tuple(map(D, dates))))
    assert p1.periods == p2.periods
    assert np.array_equal(p1.returns, p2.returns)


def test_boundaries_increasing_and_rows_match(rng):
    days = [date.fromordinal(D("2019-01-01").toordinal() + k) for k in range(0, 500, 3)]
    s = series("A", [(d.isoformat(), float(p)) for d, p in zip(days, np.exp(rng.normal(0, 0.02, len(days)).cumsum()))])
    start, end = D("2019-01-01"), D("2020-05-01")
    for period in (MonthlyCalendar(), EveryKRows(5), ExplicitBreakpoints(tuple(days[::7]))):
        b = period.boundaries([s], start, end)
        assert all(x < y for x, y in zip(b, b[1:]))
        assert b[0] >= start and b[-1] <= end
        panel, _ = build_return_panel([s], start, end, period)
        assert panel.n_periods == len(b) - 1


def test_empty_panel():
    a = series("A", [("2020-01-01", 1.0), ("2020-01-02", 1.1)])
    with pytest.raises(EmptyPanel):
        build_return_panel([a], D("2020-01-01"), D("2020-01-02"), EveryKRows(1))
    b = series("B", [("2021-01-01", 1.0)])
    with pytest.raises(EmptyPanel):
        build_return_panel([b], D("2020-01-01"), D("2020-05-01"), MonthlyCalendar())
    with pytest.raises(ValidationError):
        build_return_panel([a], D("2020-02-01"), D("2020-01-01"))


def test_parse_period(tmp_path):
    assert parse_period("monthly") == MonthlyCalendar()
    assert parse_period("rows:3") == EveryKRows(3)
    p = write(tmp_path, "date\n2020-01-17\n2020-02-21\n", "bp.txt")
    bps = load_breakpoints(p)
    assert bps == [D("2020-01-17"), D("2020-02-21")]
    assert parse_period("breakpoints", bps) == ExplicitBreakpoints(tuple(bps))
    with pytest.raises(ValidationError):
        parse_period("weekly")
    with pytest.raises(ValidationError):
        parse_period("breakpoints")
    with pytest.raises(ValidationError):
        parse_period("rows:0")


def test_returns_csv_round_trip(tmp_path, rng):
    days = [f"2020-01-{d:02d}" for d in range(1, 30)]
    ss = [series(a, [(d, float(p)) for d, p in zip(days, np.exp(rng.normal(0, 0.03, 29).cumsum()) * 37.1)]) for a in "XYZ"]
    panel, _ = build_return_panel(ss, D(days[0]), D(days[-1]), EveryKRows(2))
    path = tmp_path / "r.csv"
    write_returns_csv(panel, path)
    back = read_returns_csv(path)
    assert back.asset_ids == panel.asset_ids
    assert back.periods == panel.periods
    assert back.returns.tobytes() == panel.returns.tobytes()
