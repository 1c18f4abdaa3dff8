import numpy as np
import pytest

# 3x3 counterexample metric and point where the farthest vertex is not the
# one to drop.
REMARK_C = np.array(
    [
        [0.012, 0.004, 0.008],
        [0.004, 0.011, 0.007],
        [0.008, 0.007, 0.011],
    ]
)
REMARK_X = np.array([0.470, 0.534, -0.004])


def random_spd(rng, n, ridge=0.01):
    G = rng.uniform(-1.0, 1.0, (n, n))
    return G.T @ G + ridge * np.eye(n)


def random_simplex_point(rng, n):
    return rng.dirichlet(np.ones(n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def remark_c():
    return REMARK_C.copy()


@pytest.fixture
def remark_x():
    return REMARK_X.copy()


_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_criterion_"):
        if report.when == "call" or report.failed:
            _CRITERIA[name] = _CRITERIA.get(name, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda s: int(s.split("_")[2])):
        status = "PASS" if _CRITERIA[name] else "FAIL"
        terminalreporter.write_line(f"{status}  {name[len('test_'):]}")
