import numpy as np
import pytest

from mgalab.lp import BudgetSpec, make_mga_problem, solve
from mgalab.testbeds import reference_3d


@pytest.fixture(scope="session")
def ref3d():
    lp = reference_3d()
    return lp, solve(lp)


@pytest.fixture(scope="session")
def ref3d_problem(ref3d):
    """The reference LP with an absolute slack of 3 (budget 5)."""
    lp, sol = ref3d
    return make_mga_problem(lp, sol, BudgetSpec("absolute", 3.0), (0, 1, 2))


@pytest.fixture(scope="session")
def ref3d_vertices(ref3d_problem):
    from mgalab.testbeds import enumerate_vertices
    return enumerate_vertices(ref3d_problem.lp)


def matches_any(point, points, tol=1e-6):
    points = np.asarray(points)
    return bool(np.any(np.max(np.abs(points - np.asarray(point)), axis=1) <= tol))


_ACCEPTANCE: list[tuple[int, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""
    def record(criterion: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE.append((criterion, bool(ok), detail))
        return bool(ok)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
