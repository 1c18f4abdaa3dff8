"""SPD metric, generalized inner product and dense linear solves.

Every other module measures lengths through a :class:`MetricMatrix`:
``<x, y> = x^T C y`` with ``C`` symmetric positive definite.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    NotSquare,
    NotSymmetric,
    SingularSystem,
    ValidationError,
)

EPS = np.finfo(float).eps

SYMMETRY_RTOL = 1e-8
HYPERPLANE_TOL = 1e-9
SIMPLEX_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MetricMatrix:
    """Validated symmetric positive definite matrix.

    Build it with :func:`build_metric`; the constructor does no checking.
    """

    entries: np.ndarray
    cholesky: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __len__(self):
        return self.dim


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Point of the hyperplane ``sum(x) == 1``, optionally inside the simplex."""

    coords: np.ndarray
    feasible_simplex: bool

    def __post_init__(self):
        total = float(np.sum(self.coords))
        if abs(total - 1.0) > HYPERPLANE_TOL:
            raise ValidationError(f"weights sum to {total!r}, expected 1 within {HYPERPLANE_TOL}")
        if self.feasible_simplex and np.any(self.coords < -SIMPLEX_TOL):
            raise ValidationError("weights flagged feasible but have a negative coordinate")

    @classmethod
    def from_coords(cls, coords) -> "WeightVector":
        coords = np.asarray(coords, dtype=float)
        return cls(coords, bool(np.all(coords >= -SIMPLEX_TOL)))

    def __len__(self):
        return len(self.coords)


def as_point(x, n: int | None = None, name: str = "point") -> np.ndarray:
    """Coerce ``x`` to a float vector and check its length against ``n``."""
    if isinstance(x, WeightVector):
        x = x.coords
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"{name} has dimension {arr.shape[0]}, metric has {n}")
    return arr


def build_metric(raw) -> MetricMatrix:
    """Validate ``raw`` as a covariance metric.

    The matrix is symmetrized as ``(raw + raw.T) / 2`` and then factored by
    Cholesky; every pivot must exceed ``n * eps * max(diag)``.

    Raises
    ------
    NotSquare, NotSymmetric, NotPositiveDefinite
    """
    if isinstance(raw, MetricMatrix):
        return raw
    m = np.array(raw, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise NotSquare(f"metric must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotPositiveDefinite("metric has non-finite entries")
    n = m.shape[0]
    scale = np.max(np.abs(m))
    asym = np.max(np.abs(m - m.T))
    if asym > SYMMETRY_RTOL * scale:
        raise NotSymmetric(f"max |c_ij - c_ji| = {asym:.3g} exceeds {SYMMETRY_RTOL} * max|c|")
    m = (m + m.T) / 2.0

    max_diag = np.max(np.diag(m))
    if max_diag <= 0:
        raise NotPositiveDefinite("metric has no positive diagonal entry")
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("Cholesky factorization failed: matrix is not positive definite") from None
    pivots = np.diag(chol) ** 2
    floor = n * EPS * max_diag
    k = int(np.argmin(pivots))
    if not pivots[k] > floor:
        raise NotPositiveDefinite(
            f"Cholesky pivot {k} is {pivots[k]:.3g}, below the floor {floor:.3g}"
        )
    m.setflags(write=False)
    chol.setflags(write=False)
    return MetricMatrix(m, chol)


def inner(C: MetricMatrix, x, y) -> float:
    """Return ``x^T C y``."""
    n = C.dim
    x = as_point(x, n, "x")
    y = as_point(y, n, "y")
    return float(x @ C.entries @ y)


def sq_distance(C: MetricMatrix, x, y) -> float:
    """Squared generalized distance ``(x - y)^T C (x - y)``."""
    n = C.dim
    d = as_point(x, n, "x") - as_point(y, n, "y")
    return max(float(d @ C.entries @ d), 0.0)


def norm(C: MetricMatrix, x) -> float:
    return float(np.sqrt(sq_distance(C, x, np.zeros(C.dim))))


def solve_linear(M, b) -> np.ndarray:
    """Solve ``M x = b`` by LU with partial pivoting.

    A pivot of ``U`` at or below ``n * eps * max|M|`` is treated as singular.
    """
    M = np.asarray(M, dtype=float)
    b = np.asarray(b, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSquare(f"system matrix must be square, got shape {M.shape}")
    n = M.shape[0]
    if b.shape != (n,):
        raise DimensionMismatch(f"right-hand side has shape {b.shape}, expected ({n},)")
    if n == 0:
        return np.zeros(0)
    scale = np.max(np.abs(M))
    if not np.isfinite(scale) or scale == 0.0:
        raise SingularSystem("system matrix is zero or non-finite")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    pivots = np.abs(np.diag(lu))
    k = int(np.argmin(pivots))
    if pivots[k] <= n * EPS * scale:
        raise SingularSystem(f"pivot {k} is {pivots[k]:.3g}; system is numerically singular")
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
