"""Sample moments of aligned return panels."""
from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import DimensionMismatch, TooFewSamples, ValidationError
from .metric import MetricMatrix, as_point, build_metric


@dataclass(frozen=True, eq=False)
class ReturnPanel:
    """``T x n`` simple returns; row ``t`` covers the period ending ``periods[t]``.

    ``start`` is the boundary the first period starts from, when known.
    """

    asset_ids: tuple[str, ...]
    periods: tuple[date, ...]
    returns: np.ndarray
    start: date | None = None

    def __post_init__(self):
        r = np.array(self.returns, dtype=float)
        object.__setattr__(self, "asset_ids", tuple(self.asset_ids))
        object.__setattr__(self, "periods", tuple(self.periods))
        if r.ndim != 2:
            raise ValidationError(f"returns must be a 2-D array, got shape {r.shape}")
        if r.shape != (len(self.periods), len(self.asset_ids)):
            raise DimensionMismatch(
                f"returns shape {r.shape} does not match {len(self.periods)} periods x "
                f"{len(self.asset_ids)} assets"
            )
        if len(set(self.asset_ids)) != len(self.asset_ids):
            raise ValidationError("asset ids must be distinct")
        if any(b <= a for a, b in zip(self.periods, self.periods[1:])):
            raise ValidationError("period labels must be strictly increasing")
        if not np.all(np.isfinite(r)):
            raise ValidationError("return panel has missing or non-finite cells")
        r.setflags(write=False)
        object.__setattr__(self, "returns", r)

    @property
    def n_assets(self) -> int:
        return len(self.asset_ids)

    @property
    def n_periods(self) -> int:
        return len(self.periods)


@dataclass(frozen=True, eq=False)
class MomentEstimates:
    mean: np.ndarray
    cov: MetricMatrix
    sample_count: int
    asset_ids: tuple[str, ...] = ()


def sample_covariance(returns: np.ndarray, ddof: int = 1) -> np.ndarray:
    """Covariance with each unordered pair computed once, so it is exactly symmetric."""
    T, n = returns.shape
    centered = returns - returns.mean(axis=0)
    cov = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            cov[i, j] = cov[j, i] = np.dot(centered[:, i], centered[:, j]) / (T - ddof)
    return cov


def estimate_moments(panel: ReturnPanel, ddof: int = 1) -> MomentEstimates:
    """Mean vector and covariance metric of a return panel.

    Raises
    ------
    TooFewSamples
        Fewer than two periods.
    NotPositiveDefinite
        The sample covariance is singular (constant or collinear columns,
        or fewer usable samples than assets).
    """
    if ddof not in (0, 1):
        raise ValidationError(f"ddof must be 0 or 1, got {ddof}")
    r = panel.returns
    if r.shape[0] < 2:
        raise TooFewSamples(f"need at least 2 periods, got {r.shape[0]}")
    return MomentEstimates(
        r.mean(axis=0), build_metric(sample_covariance(r, ddof)), r.shape[0], panel.asset_ids
    )


def portfolio_moments(est: MomentEstimates, w) -> tuple[float, float]:
    """Per-period mean ``w^T m`` and standard deviation ``sqrt(w^T C w)``."""
    w = as_point(w, len(est.mean), "weights")
    var = float(w @ est.cov.entries @ w)
    return float(w @ est.mean), float(np.sqrt(max(var, 0.0)))
