"""Minimum-variance portfolios through generalized-distance projection onto the simplex."""
from .errors import *  # noqa: F401,F403
from .faces import FaceIndexSet, project_onto_face_hull
from .hyperplane import (
    HyperplaneSolution,
    Method,
    minvar_closed_form,
    minvar_matrix_a,
    minvar_two_asset,
)
from .metric import MetricMatrix, WeightVector, build_metric, inner, solve_linear, sq_distance
from .oracle import euclidean_sort_project, oracle_minvar_hyperplane, oracle_project
from .projection import (
    ProjectionResult,
    hyperface_distances,
    is_in_simplex,
    project_onto_simplex,
)

__version__ = "0.1.0"
