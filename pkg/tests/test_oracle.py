import itertools

import numpy as np
import pytest

from simplexproj.errors import DimensionTooLarge
from simplexproj.faces import project_onto_face_hull
from simplexproj.metric import build_metric, sq_distance
from simplexproj.oracle import (
    euclidean_sort_project,
    oracle_minvar_hyperplane,
    oracle_project,
)

from conftest import REMARK_C, REMARK_X, random_spd


def test_sort_project_examples():
    np.testing.assert_allclose(euclidean_sort_project([1 / 3] * 3).coords, [1 / 3] * 3)
    np.testing.assert_array_equal(euclidean_sort_project([2.0, 0.0, 0.0]).coords, [1.0, 0.0, 0.0])
    # k = 3, tau = (1.8 - 1) / 3
    np.testing.assert_allclose(euclidean_sort_project([0.6, 0.6, 0.6]).coords, [1 / 3] * 3, atol=1e-15)


def test_oracle_project_examples():
    res = oracle_project(REMARK_C, [0.2, 0.3, 0.5])
    np.testing.assert_allclose(res.point.coords, [0.2, 0.3, 0.5], atol=1e-15)
    assert res.sq_dist == pytest.approx(0.0, abs=1e-18)

    res = oracle_project(REMARK_C, REMARK_X)
    np.testing.assert_allclose(res.point.coords, [0.46786667, 0.53213333, 0.0], atol=1e-7)
    assert res.dist == pytest.approx(0.0002, abs=5e-4)
    assert res.active_face.indices == (0, 1)

    res = oracle_project(np.eye(3), [2.0, 0.0, 0.0])
    np.testing.assert_array_equal(res.point.coords, [1.0, 0.0, 0.0])
    assert res.sq_dist == pytest.approx(1.0)


def test_oracle_dimension_cap():
    with pytest.raises(DimensionTooLarge):
        oracle_project(np.eye(13), np.zeros(13))


def test_oracle_identity_matches_sort(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        a = rng.uniform(-2, 2, n)
        np.testing.assert_allclose(
            oracle_project(np.eye(n), a).point.coords, euclidean_sort_project(a).coords, rtol=0, atol=1e-9
        )


def test_oracle_no_feasible_candidate_is_closer(rng):
    for _ in range(100):
        n = int(rng.integers(2, 7))
        C = build_metric(random_spd(rng, n))
        a = rng.uniform(-2, 2, n)
        res = oracle_project(C, a)
        x = res.point.coords
        assert np.all(x >= 0) and abs(x.sum() - 1) <= 1e-9
        for size in range(1, n + 1):
            for J in itertools.combinations(range(n), size):
                y = project_onto_face_hull(C, a, J)
                if np.all(y >= -1e-10):
                    assert res.sq_dist <= sq_distance(C, a, y) + 1e-12


def test_bordered_oracle_examples():
    np.testing.assert_allclose(oracle_minvar_hyperplane(np.eye(4)).coords, [0.25] * 4)
    np.testing.assert_allclose(oracle_minvar_hyperplane(np.diag([1.0, 4.0])).coords, [0.8, 0.2])
