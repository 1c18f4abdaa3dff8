"""Orthogonal projection onto the affine hull of a simplex face."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .metric import MetricMatrix, as_point, build_metric, solve_linear


@dataclass(frozen=True, order=True)
class FaceIndexSet:
    """Sorted, non-empty set of vertex indices; ``pivot`` is the smallest."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise ValidationError("a face needs at least one vertex")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValidationError(f"face indices must be strictly increasing: {idx}")
        if idx[0] < 0:
            raise ValidationError(f"negative vertex index in {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices) -> "FaceIndexSet":
        return cls(tuple(sorted(set(int(i) for i in indices))))

    @classmethod
    def full(cls, n: int) -> "FaceIndexSet":
        return cls(tuple(range(n)))

    @property
    def pivot(self) -> int:
        return self.indices[0]

    @property
    def others(self) -> tuple[int, ...]:
        return self.indices[1:]

    def complement(self, n: int) -> tuple[int, ...]:
        s = set(self.indices)
        return tuple(i for i in range(n) if i not in s)

    def without(self, j: int) -> "FaceIndexSet":
        return FaceIndexSet(tuple(i for i in self.indices if i != j))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


def _as_face(J) -> FaceIndexSet:
    return J if isinstance(J, FaceIndexSet) else FaceIndexSet.of(J)


def face_system(c: np.ndarray, a: np.ndarray, J: FaceIndexSet):
    """Linear system whose solution holds the face coordinates of the projection.

    Rows ``i`` in ``J`` minus the pivot read
    ``sum_{j in J} x_j (c_ij - c_pj) = sum_j a_j (c_ij - c_pj)``;
    the last row is ``sum_{j in J} x_j = 1``.
    """
    idx = np.asarray(J.indices)
    diff = c[idx[1:]] - c[idx[0]]
    M = np.vstack([diff[:, idx], np.ones((1, len(idx)))])
    b = np.append(diff @ a, 1.0)
    return M, b


def project_onto_face_hull(C: MetricMatrix, a, J) -> np.ndarray:
    """C-orthogonal projection of ``a`` onto the affine hull of face ``J``.

    Coordinates outside ``J`` are zero and the result sums to one.
    """
    C = build_metric(C)
    n = C.dim
    a = as_point(a, n, "a")
    J = _as_face(J)
    if J.indices[-1] >= n:
        raise DimensionMismatch(f"face {J.indices} has an index outside 0..{n - 1}")
    x = np.zeros(n)
    if len(J) == 1:
        x[J.pivot] = 1.0
        return x
    M, b = face_system(C.entries, a, J)
    x[list(J.indices)] = solve_linear(M, b)
    return x
