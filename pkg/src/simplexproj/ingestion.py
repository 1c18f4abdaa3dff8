"""Price loading, period sampling and return-panel construction.

Two CSV layouts are read (UTF-8, header row, ``.`` decimal separator):

``long_csv``
    ``asset_id,date,close`` with one observation per row.
``wide_csv``
    ``date,<asset>,<asset>,...`` with blank cells for missing observations.

Prices are expected to be adjusted for dividends and splits already.
"""
from __future__ import annotations

import bisect
import calendar
import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import numpy as np

from .errors import EmptyPanel, NonPositivePrice, ParseError, ValidationError
from .stats import ReturnPanel

FORMATS = ("long_csv", "wide_csv")


@dataclass(frozen=True)
class PriceSeries:
    asset_id: str
    dates: tuple[date, ...]
    prices: tuple[float, ...]

    def __post_init__(self):
        if len(self.dates) != len(self.prices):
            raise ValidationError(f"{self.asset_id}: dates and prices differ in length")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValidationError(f"{self.asset_id}: dates must be strictly increasing")
        if any(not p > 0 for p in self.prices):
            raise NonPositivePrice(f"{self.asset_id}: prices must be positive")

    @property
    def observations(self):
        return list(zip(self.dates, self.prices))

    def price_at_or_before(self, d: date) -> float | None:
        k = bisect.bisect_right(self.dates, d)
        return self.prices[k - 1] if k else None

    def __len__(self):
        return len(self.dates)


@dataclass
class PriceSet:
    """Loaded series plus bookkeeping about what had to be fixed up."""

    series: list[PriceSeries]
    unsorted_fixed: int = 0
    duplicates_dropped: int = 0

    def __iter__(self):
        return iter(self.series)

    def __len__(self):
        return len(self.series)

    def __getitem__(self, k):
        return self.series[k]

    def by_id(self) -> dict[str, PriceSeries]:
        return {s.asset_id: s for s in self.series}


def parse_date(text: str, row=None, path=None) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError:
        raise ParseError(f"invalid ISO date {text!r}", row, path) from None


def _parse_price(text: str, asset: str, d: date, row, path) -> float:
    try:
        p = float(text)
    except ValueError:
        raise ParseError(f"invalid price {text!r}", row, path) from None
    if not math.isfinite(p):
        raise ParseError(f"non-finite price {text!r}", row, path)
    if p <= 0:
        raise NonPositivePrice(f"{path}: row {row}: {asset} on {d}: price {p!r} is not positive")
    return p


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [(i + 1, r) for i, r in enumerate(rows) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("file is empty; a header row is required", path=path)
    return rows


def load_prices(path, format: str = "long_csv") -> PriceSet:
    """Read price series from ``path``.

    Duplicate ``(asset, date)`` rows keep the last value. Dates that arrive
    out of order are sorted; the number of series that needed it is kept in
    :attr:`PriceSet.unsorted_fixed`.
    """
    if format not in FORMATS:
        raise ValidationError(f"unknown price format {format!r}; expected one of {FORMATS}")
    path = Path(path)
    rows = _read_rows(path)
    header_row, header = rows[0]
    header = [h.strip() for h in header]
    obs: dict[str, dict[date, float]] = defaultdict(dict)
    order: dict[str, list[date]] = defaultdict(list)
    dups = 0

    def add(asset, d, p):
        nonlocal dups
        if d in obs[asset]:
            dups += 1
        obs[asset][d] = p
        order[asset].append(d)

    if format == "long_csv":
        cols = [h.lower() for h in header]
        try:
            ia, id_, ic = cols.index("asset_id"), cols.index("date"), cols.index("close")
        except ValueError:
            raise ParseError("long_csv header must name asset_id, date and close", header_row, path) from None
        for lineno, r in rows[1:]:
            if len(r) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(r)}", lineno, path)
            asset = r[ia].strip()
            if not asset:
                raise ParseError("empty asset_id", lineno, path)
            d = parse_date(r[id_], lineno, path)
            add(asset, d, _parse_price(r[ic], asset, d, lineno, path))
    else:
        assets = header[1:]
        if not assets or any(not a for a in assets):
            raise ParseError("wide_csv header must be date followed by asset names", header_row, path)
        if len(set(assets)) != len(assets):
            raise ParseError("duplicate asset column in wide_csv header", header_row, path)
        for lineno, r in rows[1:]:
            if len(r) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(r)}", lineno, path)
            d = parse_date(r[0], lineno, path)
            for asset, cell in zip(assets, r[1:]):
                if cell.strip():
                    add(asset, d, _parse_price(cell, asset, d, lineno, path))

    unsorted = 0
    series = []
    for asset, by_date in obs.items():
        seen = order[asset]
        if any(b < a for a, b in zip(seen, seen[1:])):
            unsorted += 1
        dates = tuple(sorted(by_date))
        series.append(PriceSeries(asset, dates, tuple(by_date[d] for d in dates)))
    return PriceSet(series, unsorted, dups)


# Period schemes -------------------------------------------------------------


@dataclass(frozen=True)
class MonthlyCalendar:
    """Boundaries at ``start``, every calendar month end in between, and ``end``."""

    def boundaries(self, series, start: date, end: date) -> list[date]:
        out = [start]
        y, m = start.year, start.month
        while True:
            month_end = date(y, m, calendar.monthrange(y, m)[1])
            if month_end >= end:
                break
            if month_end > start:
                out.append(month_end)
            y, m = (y + 1, 1) if m == 12 else (y, m + 1)
        out.append(end)
        return out


@dataclass(frozen=True)
class EveryKRows:
    """Every ``k``-th observation date (union over assets) inside the window."""

    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"row stride must be at least 1, got {self.k}")

    def boundaries(self, series, start: date, end: date) -> list[date]:
        dates = sorted({d for s in series for d in s.dates if start <= d <= end})
        return dates[:: self.k]


@dataclass(frozen=True)
class ExplicitBreakpoints:
    """Caller-supplied boundary dates, e.g. the third Friday of each month."""

    dates: tuple[date, ...] = field(default=())

    def boundaries(self, series, start: date, end: date) -> list[date]:
        return sorted({d for d in self.dates if start <= d <= end})


def parse_period(spec: str, breakpoints=None):
    """``monthly``, ``rows:K`` or ``breakpoints`` (with a list of dates)."""
    spec = spec.strip().lower()
    if spec in ("monthly", "monthly_calendar"):
        return MonthlyCalendar()
    if spec.startswith("rows"):
        _, _, k = spec.partition(":")
        try:
            return EveryKRows(int(k) if k else 1)
        except ValueError:
            raise ValidationError(f"invalid row stride in period {spec!r}") from None
    if spec in ("breakpoints", "explicit_breakpoints"):
        if not breakpoints:
            raise ValidationError("period 'breakpoints' needs a list of breakpoint dates")
        return ExplicitBreakpoints(tuple(breakpoints))
    raise ValidationError(f"unknown period scheme {spec!r}")


def load_breakpoints(path) -> list[date]:
    """One ISO date per line; a ``date`` header line is allowed."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip().split(",")[0].strip()
            if not text or (lineno == 1 and text.lower() == "date"):
                continue
            out.append(parse_date(text, lineno, path))
    return out


def build_return_panel(
    series,
    start: date,
    end: date,
    period=None,
    min_coverage: float = 1.0,
) -> tuple[ReturnPanel, list[str]]:
    """Sample each asset at the period boundaries and compute simple returns.

    The price used at a boundary is the last observation at or before it.
    An asset whose share of sampled boundaries is below ``min_coverage`` is
    excluded and reported. When a partially covered asset is kept, leading
    boundaries are dropped until every kept asset has a price, so the panel
    is always complete.

    Returns
    -------
    (ReturnPanel, list of excluded asset ids)
    """
    if not start < end:
        raise ValidationError(f"start {start} must be before end {end}")
    if not 0.0 <= min_coverage <= 1.0:
        raise ValidationError("min_coverage must lie in [0, 1]")
    series = list(series)
    period = period or MonthlyCalendar()
    bounds = period.boundaries(series, start, end)
    if len(bounds) < 3:
        raise EmptyPanel(f"{len(bounds)} period boundaries in [{start}, {end}]; need at least 3")

    kept, sampled, excluded = [], [], []
    for s in series:
        prices = [s.price_at_or_before(b) for b in bounds]
        coverage = sum(p is not None for p in prices) / len(bounds)
        if coverage < min_coverage or coverage == 0.0:
            excluded.append(s.asset_id)
        else:
            kept.append(s.asset_id)
            sampled.append(prices)
    if not kept:
        raise EmptyPanel("no asset has enough history in the window")

    first = max(next(k for k, p in enumerate(prices) if p is not None) for prices in sampled)
    bounds = bounds[first:]
    if len(bounds) < 3:
        raise EmptyPanel("fewer than 2 periods remain once every kept asset has a price")
    levels = np.array([prices[first:] for prices in sampled], dtype=float).T
    returns = levels[1:] / levels[:-1] - 1.0
    panel = ReturnPanel(tuple(kept), tuple(bounds[1:]), returns, start=bounds[0])
    return panel, excluded


# Return-panel and series files ----------------------------------------------


def write_returns_csv(panel: ReturnPanel, path) -> None:
    """Long CSV ``period,asset_id,return``; floats written with ``repr``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["period", "asset_id", "return"])
        for t, d in enumerate(panel.periods):
            for i, a in enumerate(panel.asset_ids):
                w.writerow([d.isoformat(), a, repr(float(panel.returns[t, i]))])


def read_returns_csv(path) -> ReturnPanel:
    rows = _read_rows(path)
    cells: dict[tuple[date, str], float] = {}
    assets: list[str] = []
    periods: list[date] = []
    for lineno, r in rows[1:]:
        if len(r) != 3:
            raise ParseError(f"expected 3 fields, got {len(r)}", lineno, path)
        d = parse_date(r[0], lineno, path)
        a = r[1].strip()
        try:
            v = float(r[2])
        except ValueError:
            raise ParseError(f"invalid return {r[2]!r}", lineno, path) from None
        if a not in assets:
            assets.append(a)
        if d not in periods:
            periods.append(d)
        cells[(d, a)] = v
    periods.sort()
    try:
        returns = [[cells[(d, a)] for a in assets] for d in periods]
    except KeyError as e:
        raise ParseError(f"missing cell for {e.args[0]}", path=path) from None
    return ReturnPanel(tuple(assets), tuple(periods), np.array(returns))


def read_period_series(path) -> tuple[list[date], np.ndarray]:
    """Two-column CSV ``period,return`` (for example a benchmark index)."""
    rows = _read_rows(path)
    periods, values = [], []
    for lineno, r in rows[1:]:
        if len(r) < 2:
            raise ParseError("expected period,return", lineno, path)
        periods.append(parse_date(r[0], lineno, path))
        try:
            values.append(float(r[1]))
        except ValueError:
            raise ParseError(f"invalid return {r[1]!r}", lineno, path) from None
    return periods, np.array(values)


def read_weights_csv(path) -> dict[str, float]:
    """Two-column CSV ``asset_id,weight`` with weights as fractions."""
    rows = _read_rows(path)
    out = {}
    for lineno, r in rows[1:]:
        if len(r) < 2:
            raise ParseError("expected asset_id,weight", lineno, path)
        try:
            out[r[0].strip()] = float(r[1])
        except ValueError:
            raise ParseError(f"invalid weight {r[1]!r}", lineno, path) from None
    return out
