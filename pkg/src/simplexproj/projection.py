"""Generalized-distance projection onto the standard simplex.

The recursion works face by face. A point is projected onto the affine hull
of the current face; if the projection has no negative coordinate it is the
answer. Otherwise the nearest point lies on one of the face's hyperfaces
(faces with one vertex removed), so every hyperface is solved recursively and
the closest one wins. On an edge (two vertices) the closer vertex wins.

Orthogonal projections onto nested affine hulls compose, so projecting the
original query point onto a sub-face gives the same point as projecting the
intermediate projection. The solver therefore always measures from the
original query point, which lets the memo table share a sub-face between all
the paths that reach it: at most ``2**n`` faces are ever solved.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooLarge, ValidationError
from .faces import FaceIndexSet, project_onto_face_hull
from .metric import (
    HYPERPLANE_TOL,
    SIMPLEX_TOL,
    MetricMatrix,
    WeightVector,
    as_point,
    build_metric,
    sq_distance,
)

DEFAULT_MAX_DIM = 24
# hyperface distances this close (relative) count as ties
TIE_RTOL = 1e-12
MAX_DIM_ENV = "SIMPLEXPROJ_MAX_DIM"


@dataclass(frozen=True)
class ProjectionStats:
    faces_solved: int
    cache_hits: int
    max_depth: int


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    point: WeightVector
    sq_dist: float
    active_face: FaceIndexSet
    stats: ProjectionStats | None = field(default=None, compare=False)

    @property
    def dist(self) -> float:
        return float(np.sqrt(self.sq_dist))


def is_in_simplex(x, tol: float = SIMPLEX_TOL) -> bool:
    if tol < 0:
        raise ValidationError("tolerance must be non-negative")
    x = np.asarray(x, dtype=float)
    return bool(np.all(x >= -tol) and abs(x.sum() - 1.0) <= max(tol, HYPERPLANE_TOL))


def max_dim_from_env() -> int:
    raw = os.environ.get(MAX_DIM_ENV)
    if not raw:
        return DEFAULT_MAX_DIM
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}") from None


class _FaceSolver:
    """Memoized recursion for a single query point; discarded after the call."""

    def __init__(self, C: MetricMatrix, a: np.ndarray, tol: float):
        self.C = C
        self.a = a
        self.key = a.tobytes()
        self.tol = tol
        self.cache: dict[tuple, np.ndarray] = {}
        self.hits = 0
        self.max_depth = 0

    def nearest(self, J: FaceIndexSet, depth: int = 0) -> np.ndarray:
        key = (J.indices, self.key)
        if key in self.cache:
            self.hits += 1
            return self.cache[key]
        self.max_depth = max(self.max_depth, depth)
        x = project_onto_face_hull(self.C, self.a, J)
        if np.all(x >= -self.tol):
            best = x
        elif len(J) == 2:
            best = self._closer_vertex(x, J)
        else:
            best = None
            for j, p in self.hyperfaces(x, J, depth):
                d = sq_distance(self.C, x, p)
                if best is None or _strictly_less(d, best_d):
                    best, best_d = p, d
        self.cache[key] = best
        return best

    def hyperfaces(self, x, J, depth):
        for j in J:
            yield j, self.nearest(J.without(j), depth + 1)

    def _closer_vertex(self, x, J):
        n = self.C.dim
        v0, v1 = np.zeros(n), np.zeros(n)
        v0[J.indices[0]] = 1.0
        v1[J.indices[1]] = 1.0
        return v0 if sq_distance(self.C, x, v0) <= sq_distance(self.C, x, v1) else v1

    def stats(self) -> ProjectionStats:
        return ProjectionStats(len(self.cache), self.hits, self.max_depth)


def _strictly_less(d, best):
    return d < best - TIE_RTOL * best


def _clean(x: np.ndarray, tol: float) -> np.ndarray:
    """Zero out coordinates in ``[-tol, 0)`` and renormalize only if any were touched."""
    x = np.array(x, dtype=float)
    tiny = (x < 0) & (x >= -tol)
    if tiny.any():
        x[tiny] = 0.0
        x /= x.sum()
    return x


def project_onto_simplex(C, a, *, tol: float = SIMPLEX_TOL, max_dim: int | None = None) -> ProjectionResult:
    """Nearest point of the standard simplex to ``a`` in the metric ``C``.

    Parameters
    ----------
    C : MetricMatrix or array_like
        SPD metric; raw arrays go through :func:`build_metric`.
    a : array_like
        Query point of the same dimension.
    tol : float
        Per-coordinate feasibility tolerance.
    max_dim : int, optional
        Refuse the face recursion above this dimension. Defaults to
        ``$SIMPLEXPROJ_MAX_DIM`` or 24. Not applied when the projection onto
        the hyperplane is already feasible.
    """
    C = build_metric(C)
    n = C.dim
    a = np.array(as_point(a, n, "a"))
    solver = _FaceSolver(C, a, tol)
    full = FaceIndexSet.full(n)

    x = project_onto_face_hull(C, a, full)
    if not np.all(x >= -tol):
        limit = max_dim_from_env() if max_dim is None else max_dim
        if n > limit:
            raise DimensionTooLarge(
                f"face recursion refused for n={n} > {limit}; raise {MAX_DIM_ENV} to allow it"
            )
    point = _clean(solver.nearest(full), tol)
    active = FaceIndexSet(tuple(int(i) for i in np.flatnonzero(point > tol)))
    return ProjectionResult(
        WeightVector(point, True), sq_distance(C, a, point), active, solver.stats()
    )


def hyperface_distances(C, x, J, *, tol: float = SIMPLEX_TOL) -> list[tuple[int, float]]:
    """Squared distance from ``x`` to each hyperface ``J - {j}``, in ``J`` order.

    Each entry is the full recursive distance to the sub-simplex, not to its
    affine hull. The first minimal entry names the hyperface the projection
    recursion would descend into.
    """
    C = build_metric(C)
    x = np.array(as_point(x, C.dim, "x"))
    J = J if isinstance(J, FaceIndexSet) else FaceIndexSet.of(J)
    if len(J) < 3:
        raise ValidationError("hyperface distances need a face with at least three vertices")
    solver = _FaceSolver(C, x, tol)
    return [(j, sq_distance(C, x, p)) for j, p in solver.hyperfaces(x, J, 0)]


def closest_hyperface(distances: list[tuple[int, float]]) -> int:
    """Dropped index of the nearest hyperface; ties go to the smallest index."""
    best_j, best_d = None, None
    for j, d in sorted(distances):
        if best_j is None or _strictly_less(d, best_d):
            best_j, best_d = j, d
    return best_j
