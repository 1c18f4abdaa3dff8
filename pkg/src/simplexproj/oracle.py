"""Reference solvers used to check the main algorithms.

They are slow on purpose: exhaustive face enumeration, the identity-metric
sort-and-threshold projection, and the bordered KKT system for the hyperplane
problem. None of them calls into :mod:`simplexproj.projection`.
"""
from __future__ import annotations

import itertools

import numpy as np

from .errors import DimensionTooLarge
from .faces import FaceIndexSet, project_onto_face_hull
from .metric import SIMPLEX_TOL, WeightVector, as_point, build_metric, solve_linear, sq_distance
from .projection import ProjectionResult

ORACLE_MAX_DIM = 12


def oracle_project(C, a) -> ProjectionResult:
    """Exhaustive projection onto the simplex.

    The minimizer lies in the relative interior of some face, where it equals
    the projection onto that face's affine hull. Projecting onto all
    ``2**n - 1`` hulls and keeping the closest feasible candidate finds it.
    Ties keep the lexicographically smallest face.
    """
    C = build_metric(C)
    n = C.dim
    if n > ORACLE_MAX_DIM:
        raise DimensionTooLarge(f"oracle enumerates 2**n faces; n={n} exceeds {ORACLE_MAX_DIM}")
    a = as_point(a, n, "a")
    best, best_d = None, np.inf
    for size in range(1, n + 1):
        for J in itertools.combinations(range(n), size):
            x = project_onto_face_hull(C, a, J)
            if np.any(x < -SIMPLEX_TOL):
                continue
            d = sq_distance(C, a, x)
            if d < best_d:
                best, best_d = x, d
    best = np.where(best < 0, 0.0, best)
    best /= best.sum()
    active = FaceIndexSet(tuple(int(i) for i in np.flatnonzero(best > SIMPLEX_TOL)))
    return ProjectionResult(WeightVector(best, True), sq_distance(C, a, best), active)


def euclidean_sort_project(a) -> WeightVector:
    """Identity-metric projection onto the simplex by sorting and thresholding."""
    a = as_point(a)
    u = np.sort(a)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, len(a) + 1)
    rho = int(np.count_nonzero(u - css / k > 0))
    tau = css[rho - 1] / rho
    return WeightVector(np.maximum(a - tau, 0.0), True)


def oracle_minvar_hyperplane(C) -> WeightVector:
    """Solve ``[[2C, u], [u^T, 0]] (x, lam) = (0, 1)`` and return ``x``."""
    C = build_metric(C)
    n = C.dim
    K = np.zeros((n + 1, n + 1))
    K[:n, :n] = 2.0 * C.entries
    K[:n, n] = 1.0
    K[n, :n] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    return WeightVector.from_coords(solve_linear(K, rhs)[:n])
