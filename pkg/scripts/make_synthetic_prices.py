"""Regenerate tests/data/synthetic_prices.csv and its benchmark file.

Five assets driven by one market factor over business days 2015-2020, plus an
index series used as the benchmark. Seeded, so the output is reproducible.
"""
from __future__ import annotations

import argparse
from datetime import date
from pathlib import Path

import numpy as np
import pandas as pd

from simplexproj.ingestion import EveryKRows, MonthlyCalendar, build_return_panel, load_prices

ASSETS = ["AAA", "BBB", "CCC", "DDD", "EEE"]
BETAS = np.array([0.6, 0.9, 1.3, 0.8, 1.1])
IDIO = np.array([0.008, 0.010, 0.018, 0.007, 0.012])
DRIFT = np.array([0.0004, 0.0002, 0.0006, 0.0001, 0.0003])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=Path(__file__).resolve().parents[1] / "tests" / "data", type=Path)
    ap.add_argument("--seed", type=int, default=20200721)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    days = pd.bdate_range("2015-01-02", "2020-12-31")
    market = rng.normal(0.0002, 0.011, len(days))
    rets = DRIFT + market[:, None] * BETAS + rng.normal(0.0, 1.0, (len(days), 5)) * IDIO
    prices = 100.0 * np.cumprod(1.0 + rets, axis=0)
    index = 1000.0 * np.cumprod(1.0 + market)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    rows = [
        (a, d.date().isoformat(), f"{prices[t, i]:.4f}")
        for i, a in enumerate(ASSETS)
        for t, d in enumerate(days)
    ]
    pd.DataFrame(rows, columns=["asset_id", "date", "close"]).to_csv(
        args.out_dir / "synthetic_prices.csv", index=False
    )
    pd.DataFrame(
        {"asset_id": "INDEX", "date": [d.date().isoformat() for d in days], "close": [f"{v:.4f}" for v in index]}
    ).to_csv(args.out_dir / "synthetic_index.csv", index=False)

    # benchmark per-period returns on the default monthly calendar
    idx = load_prices(args.out_dir / "synthetic_index.csv")
    panel, _ = build_return_panel(idx, days[0].date(), days[-1].date(), MonthlyCalendar())
    pd.DataFrame(
        {"period": [d.isoformat() for d in panel.periods], "return": [repr(float(x)) for x in panel.returns[:, 0]]}
    ).to_csv(args.out_dir / "synthetic_benchmark.csv", index=False)


if __name__ == "__main__":
    main()
