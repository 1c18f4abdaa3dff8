"""Command line: ``simplexproj project|minvar|backtest``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .backtest import run_backtest, write_report
from .errors import NumericalError, ParseError, ValidationError
from .hyperplane import minvar_closed_form
from .ingestion import (
    FORMATS,
    build_return_panel,
    load_breakpoints,
    load_prices,
    parse_date,
    parse_period,
    read_period_series,
    read_weights_csv,
)
from .metric import SIMPLEX_TOL, WeightVector, build_metric
from .oracle import oracle_project
from .projection import is_in_simplex, project_onto_simplex
from .stats import estimate_moments, portfolio_moments

log = logging.getLogger("simplexproj")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def _floats(cells):
    try:
        return [float(c) for c in cells]
    except ValueError:
        return None


def read_matrix_csv(path) -> np.ndarray:
    """Numeric CSV; an optional header row and an optional label column are skipped."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(i + 1, [c.strip() for c in r]) for i, r in enumerate(csv.reader(fh)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty matrix file", path=path)
    if _floats(rows[0][1]) is None:
        rows = rows[1:]
    if rows and all(_floats(r[1:]) is not None for _, r in rows) and any(
        _floats(r[:1]) is None for _, r in rows
    ):
        rows = [(i, r[1:]) for i, r in rows]
    out = []
    for lineno, r in rows:
        vals = _floats(r)
        if vals is None:
            raise ParseError("non-numeric cell", lineno, path)
        out.append(vals)
    if not out or any(len(r) != len(out[0]) for r in out):
        raise ParseError("matrix rows have unequal lengths", path=path)
    return np.array(out)


def read_vector_csv(path) -> np.ndarray:
    """A single row or a single column of numbers."""
    m = read_matrix_csv(path)
    if m.shape[0] == 1 or m.shape[1] == 1:
        return m.ravel()
    raise ParseError(f"expected one row or one column, got shape {m.shape}", path=path)


def _result_dict(res):
    return {
        "point": [float(v) for v in res.point.coords],
        "sq_dist": res.sq_dist,
        "dist": res.dist,
        "active_face": list(res.active_face.indices),
    }


def cmd_project(args) -> int:
    C = build_metric(read_matrix_csv(args.cov))
    a = read_vector_csv(args.point)
    res = project_onto_simplex(C, a)
    out = {**_result_dict(res), "method": "algorithm1"}
    if res.stats is not None:
        out["stats"] = {
            "faces_solved": res.stats.faces_solved,
            "cache_hits": res.stats.cache_hits,
            "max_depth": res.stats.max_depth,
        }
    if args.oracle:
        ref = oracle_project(C, a)
        out["oracle"] = _result_dict(ref)
        out["max_deviation"] = float(np.max(np.abs(res.point.coords - ref.point.coords)))
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _window(args, prices):
    dates = [d for s in prices for d in s.dates]
    if not dates:
        raise ValidationError("price file has no observations")
    start = parse_date(args.start) if args.start else min(dates)
    end = parse_date(args.end) if args.end else max(dates)
    return start, end


def _panel(args):
    prices = load_prices(args.prices, args.format)
    if prices.unsorted_fixed:
        log.warning("%d series had unsorted dates and were sorted", prices.unsorted_fixed)
    bps = load_breakpoints(args.breakpoints) if args.breakpoints else None
    period = parse_period("breakpoints" if bps and args.period == "monthly" else args.period, bps)
    start, end = _window(args, prices)
    panel, excluded = build_return_panel(prices, start, end, period, args.min_coverage)
    return panel, excluded


def _pct(x):
    return f"{100.0 * x:.2f}"


def minvar_report(panel, excluded, ddof=1, short_selling=True) -> dict:
    est = estimate_moments(panel, ddof)
    closed = minvar_closed_form(est.cov)
    if short_selling:
        w = closed.weights
        extra = {}
    else:
        res = project_onto_simplex(est.cov, np.zeros(panel.n_assets))
        w = res.point
        extra = {"active_assets": [panel.asset_ids[i] for i in res.active_face.indices]}
    mean, std = portfolio_moments(est, w)
    ids = panel.asset_ids
    return {
        "assets": list(ids),
        "excluded": list(excluded),
        "window": {
            "start": panel.start.isoformat() if panel.start else None,
            "end": panel.periods[-1].isoformat(),
            "periods": panel.n_periods,
        },
        "ddof": ddof,
        "short_selling": short_selling,
        "short_selling_solution_feasible": bool(is_in_simplex(closed.weights.coords, SIMPLEX_TOL)),
        "weights": {a: float(x) for a, x in zip(ids, w.coords)},
        "weights_pct": {a: _pct(x) for a, x in zip(ids, w.coords)},
        "mean": mean,
        "stddev": std,
        "mean_pct": _pct(mean),
        "stddev_pct": _pct(std),
        **extra,
    }


def cmd_minvar(args) -> int:
    panel, excluded = _panel(args)
    report = minvar_report(panel, excluded, args.ddof, not args.no_short_selling)
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _weights_for(args, panel):
    if args.weights == "minvar":
        rep = minvar_report(panel, [], args.ddof, not args.no_short_selling)
        return WeightVector.from_coords([rep["weights"][a] for a in panel.asset_ids])
    given = read_weights_csv(args.weights)
    unknown = sorted(set(given) - set(panel.asset_ids))
    if unknown:
        raise ValidationError(f"weights name assets not in the panel: {', '.join(unknown)}")
    return WeightVector.from_coords([given.get(a, 0.0) for a in panel.asset_ids])


def cmd_backtest(args) -> int:
    panel, excluded = _panel(args)
    w = _weights_for(args, panel)
    bench = None
    if args.benchmark:
        labels, values = read_period_series(args.benchmark)
        bench = (tuple(labels), values)
    report = run_backtest(panel, w, bench)
    write_report(report, args.out)
    s = report.summary()
    line = (
        f"periods={panel.n_periods} final_index={s['final_index']:.2f} "
        f"mean_yearly={_pct(s['mean_yearly'])}% stddev_yearly={_pct(s['stddev_yearly'])}%"
    )
    if s["benchmark_final_index"] is not None:
        line += (
            f" benchmark_final_index={s['benchmark_final_index']:.2f}"
            f" benchmark_mean_yearly={_pct(s['benchmark_mean_yearly'])}%"
            f" benchmark_stddev_yearly={_pct(s['benchmark_stddev_yearly'])}%"
        )
    if excluded:
        line += f" excluded={','.join(excluded)}"
    print(line)
    return EXIT_OK


def _existing_file(text):
    if not Path(text).is_file():
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return text


def _add_panel_flags(p):
    p.add_argument("prices", type=_existing_file, help="price CSV")
    p.add_argument("--format", choices=FORMATS, default="long_csv")
    p.add_argument("--start", help="first boundary (ISO date); default first observation")
    p.add_argument("--end", help="last boundary (ISO date); default last observation")
    p.add_argument("--period", default="monthly", help="monthly, rows:K or breakpoints (default monthly)")
    p.add_argument("--breakpoints", type=_existing_file, help="file of ISO boundary dates")
    p.add_argument("--min-coverage", type=float, default=1.0, help="minimum share of sampled boundaries")
    p.add_argument("--ddof", type=int, choices=(0, 1), default=1)
    p.add_argument("--no-short-selling", action="store_true")
    p.add_argument("--deterministic", action="store_true", help="single-threaded run")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplexproj", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project a point onto the simplex under a covariance metric")
    p.add_argument("cov", type=_existing_file, help="CSV n x n matrix")
    p.add_argument("point", type=_existing_file, help="CSV vector of length n")
    p.add_argument("--oracle", action="store_true", help="also run exhaustive face enumeration")
    p.add_argument("--deterministic", action="store_true", help="single-threaded run")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("minvar", help="minimum-variance weights from prices")
    _add_panel_flags(p)
    p.set_defaults(func=cmd_minvar)

    p = sub.add_parser("backtest", help="backtest fixed weights against an optional benchmark")
    _add_panel_flags(p)
    p.add_argument("--weights", default="minvar", help="CSV asset_id,weight or 'minvar'")
    p.add_argument("--benchmark", type=_existing_file, help="CSV period,return aligned to the panel")
    p.add_argument("--out", default="backtest_report", help="output directory")
    p.set_defaults(func=cmd_backtest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
