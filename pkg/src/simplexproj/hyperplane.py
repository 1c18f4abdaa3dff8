"""Minimum-variance weights on the hyperplane ``sum(x) == 1`` (short selling allowed)."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric, ValidationError
from .metric import MetricMatrix, WeightVector, build_metric, inner, solve_linear


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    MATRIX_A = "matrix_a"


@dataclass(frozen=True)
class HyperplaneSolution:
    weights: WeightVector
    variance: float
    method: Method


def _solution(C, x, method):
    w = WeightVector.from_coords(x)
    return HyperplaneSolution(w, inner(C, w.coords, w.coords), method)


def minvar_closed_form(C: MetricMatrix) -> HyperplaneSolution:
    """``C^-1 u / (u^T C^-1 u)`` with ``u`` the all-ones vector, via one solve."""
    C = build_metric(C)
    z = solve_linear(C.entries, np.ones(C.dim))
    return _solution(C, z / z.sum(), Method.CLOSED_FORM)


def matrix_a(C: MetricMatrix) -> np.ndarray:
    """Rows ``c_1j - c_ij`` for ``i = 2..n`` followed by a row of ones.

    ``A x = (0, ..., 0, 1)`` states that ``x`` lies on the hyperplane and is
    C-orthogonal to every edge direction ``e_1 - e_i``.
    """
    c = C.entries
    return np.vstack([c[0] - c[1:], np.ones((1, C.dim))])


def minvar_matrix_a(C: MetricMatrix) -> HyperplaneSolution:
    """Last column of ``A^-1``, obtained as ``solve(A, e_n)``."""
    C = build_metric(C)
    if C.dim < 2:
        raise ValidationError("the matrix-A method needs at least two assets")
    rhs = np.zeros(C.dim)
    rhs[-1] = 1.0
    return _solution(C, solve_linear(matrix_a(C), rhs), Method.MATRIX_A)


def minvar_two_asset(v1: float, v2: float, cov: float) -> WeightVector:
    """Two-asset minimum-variance weights from the variances and the covariance."""
    if not (v1 > 0 and v2 > 0 and v1 * v2 > cov * cov):
        raise ValidationError("[[v1, cov], [cov, v2]] is not positive definite")
    denom = v1 + v2 - 2.0 * cov
    if denom <= 1e-14:
        raise DegenerateMetric(f"v1 + v2 - 2 cov = {denom!r} is too small")
    return WeightVector.from_coords([(v2 - cov) / denom, (v1 - cov) / denom])
