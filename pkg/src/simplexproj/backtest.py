"""Fixed-weight backtests and their report files."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import MisalignedBenchmark
from .metric import WeightVector, as_point
from .stats import ReturnPanel

BASE_INDEX = 100.0


@dataclass(frozen=True, eq=False)
class BacktestReport:
    asset_ids: tuple[str, ...]
    weights: WeightVector
    periods: tuple[date, ...]
    per_period_returns: np.ndarray
    benchmark_returns: np.ndarray | None
    # (year, portfolio, benchmark or None)
    yearly_returns: list[tuple[int, float, float | None]]
    mean_yearly: float
    stddev_yearly: float
    benchmark_mean_yearly: float | None
    benchmark_stddev_yearly: float | None
    # (label, portfolio index, benchmark index or None); label None for the start row
    cumulative: list[tuple[date | None, float, float | None]]

    @property
    def final_index(self) -> float:
        return self.cumulative[-1][1]

    def summary(self) -> dict:
        return {
            "mean_yearly": self.mean_yearly,
            "stddev_yearly": self.stddev_yearly,
            "benchmark_mean_yearly": self.benchmark_mean_yearly,
            "benchmark_stddev_yearly": self.benchmark_stddev_yearly,
            "final_index": self.final_index,
            "benchmark_final_index": self.cumulative[-1][2],
        }

    def to_dict(self) -> dict:
        def label(d):
            return None if d is None else d.isoformat()

        return {
            "weights": dict(zip(self.asset_ids, map(float, self.weights.coords))),
            "per_period": [
                {
                    "period": d.isoformat(),
                    "portfolio": float(r),
                    "benchmark": None if self.benchmark_returns is None else float(self.benchmark_returns[t]),
                }
                for t, (d, r) in enumerate(zip(self.periods, self.per_period_returns))
            ],
            "yearly_returns": [
                {"year": y, "portfolio": p, "benchmark": b} for y, p, b in self.yearly_returns
            ],
            "summary": self.summary(),
            "cumulative": [
                {"period": label(d), "portfolio": p, "benchmark": b} for d, p, b in self.cumulative
            ],
        }


def _compound_by_year(periods, r):
    years: dict[int, float] = {}
    for d, x in zip(periods, r):
        years[d.year] = years.get(d.year, 1.0) * (1.0 + x)
    return {y: g - 1.0 for y, g in years.items()}


def _index(r):
    return BASE_INDEX * np.concatenate([[1.0], np.cumprod(1.0 + np.asarray(r))])


def run_backtest(panel: ReturnPanel, w, benchmark=None) -> BacktestReport:
    """Apply fixed weights every period and compound the result.

    Weights are reapplied each period (rebalancing to target). Years are the
    calendar years of the period labels; partial years are kept as-is. The
    yearly standard deviation is the population one.

    Parameters
    ----------
    benchmark : array_like or (periods, values), optional
        Per-period benchmark returns. A bare array must have one value per
        panel period; a ``(periods, values)`` pair must carry exactly the
        panel's period labels.
    """
    if not isinstance(w, WeightVector):
        w = WeightVector.from_coords(w)
    coords = as_point(w.coords, panel.n_assets, "weights")
    r = panel.returns @ coords

    bench = None
    if benchmark is not None:
        if isinstance(benchmark, tuple) and len(benchmark) == 2:
            labels, values = benchmark
            if tuple(labels) != panel.periods:
                raise MisalignedBenchmark(
                    f"benchmark has {len(labels)} periods that do not match the panel's {panel.n_periods}"
                )
            bench = np.asarray(values, dtype=float)
        else:
            bench = np.asarray(benchmark, dtype=float)
            if bench.shape != (panel.n_periods,):
                raise MisalignedBenchmark(
                    f"benchmark has shape {bench.shape}, panel has {panel.n_periods} periods"
                )
        if not np.all(np.isfinite(bench)):
            raise MisalignedBenchmark("benchmark has missing or non-finite values")

    yearly_p = _compound_by_year(panel.periods, r)
    yearly_b = _compound_by_year(panel.periods, bench) if bench is not None else {}
    years = sorted(yearly_p)
    yearly = [(y, yearly_p[y], yearly_b.get(y)) for y in years]
    py = np.array([yearly_p[y] for y in years])

    idx_p = _index(r)
    idx_b = _index(bench) if bench is not None else [None] * len(idx_p)
    labels = [panel.start] + list(panel.periods)
    cumulative = [
        (d, float(p), None if b is None else float(b)) for d, p, b in zip(labels, idx_p, idx_b)
    ]
    if bench is not None:
        by = np.array([yearly_b[y] for y in years])
        b_mean, b_std = float(by.mean()), float(by.std())
    else:
        b_mean = b_std = None
    return BacktestReport(
        panel.asset_ids, w, panel.periods, r, bench, yearly,
        float(py.mean()), float(py.std()), b_mean, b_std, cumulative,
    )


def _fmt(x):
    return "" if x is None else repr(float(x))


def write_report(report: BacktestReport, out_dir) -> list[Path]:
    """Write one CSV per table plus ``report.json``; return the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tables = {
        "weights.csv": (
            ["asset_id", "weight", "weight_pct"],
            [[a, _fmt(x), f"{100 * x:.2f}"] for a, x in zip(report.asset_ids, report.weights.coords)],
        ),
        "per_period_returns.csv": (
            ["period", "portfolio", "benchmark"],
            [[d.isoformat(), _fmt(p), "" if report.benchmark_returns is None else _fmt(report.benchmark_returns[t])]
             for t, (d, p) in enumerate(zip(report.periods, report.per_period_returns))],
        ),
        "yearly_returns.csv": (
            ["year", "portfolio", "benchmark", "portfolio_pct", "benchmark_pct"],
            [[y, _fmt(p), _fmt(b), f"{100 * p:.2f}", "" if b is None else f"{100 * b:.2f}"]
             for y, p, b in report.yearly_returns],
        ),
        "cumulative.csv": (
            ["period", "portfolio_index", "benchmark_index"],
            [["" if d is None else d.isoformat(), _fmt(p), _fmt(b)] for d, p, b in report.cumulative],
        ),
        "summary.csv": (
            ["statistic", "value"],
            [[k, _fmt(v)] for k, v in report.summary().items()],
        ),
    }
    written = []
    for name, (header, rows) in tables.items():
        path = out / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(header)
            wr.writerows(rows)
        written.append(path)
    path = out / "report.json"
    path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    written.append(path)
    return written
