"""Solver backend contract and the optional HiGHS adapter.

Every backend exposes ``load(lp)``, ``set_objective(c)`` and ``solve()``
returning a :class:`~mgalab.lp.Solution`.  Backends are single-threaded;
parallel callers create one instance per worker.
"""
from __future__ import annotations

import time
from typing import Protocol

import numpy as np
from scipy.optimize import linprog

from .lp import LinearProgram, Solution
from .simplex import Basis, SimplexBackend

__all__ = ["Backend", "SimplexBackend", "HighsBackend", "Basis", "make_backend"]


class Backend(Protocol):
    problem: LinearProgram | None

    def load(self, lp: LinearProgram) -> None: ...

    def set_objective(self, c: np.ndarray) -> None: ...

    def solve(self) -> Solution: ...


class HighsBackend:
    """Adapter over ``scipy.optimize.linprog`` (HiGHS dual simplex).

    No warm starts and no tie-break objective; used for cross-checking.
    """

    def __init__(self, method: str = "highs-ds"):
        self.method = method
        self.problem: LinearProgram | None = None

    def load(self, lp: LinearProgram) -> None:
        self.problem = lp
        self._c = np.array(lp.objective, dtype=float)
        self._lo = np.array(lp.lower, dtype=float)
        self._hi = np.array(lp.upper, dtype=float)

    def set_objective(self, c: np.ndarray) -> None:
        self._c = np.asarray(c, dtype=float).copy()

    def set_bounds(self, index, lower, upper) -> None:
        self._lo[index] = lower
        self._hi[index] = upper

    def solve(self) -> Solution:
        lp = self.problem
        sign = 1.0 if lp.sense == "min" else -1.0
        rel = np.array(lp.relations)
        A = lp.A.tocsr()
        le, ge, eq = rel == "<=", rel == ">=", rel == "="
        import scipy.sparse as sp
        A_ub = sp.vstack([A[le], -A[ge]], format="csr")
        b_ub = np.concatenate([lp.rhs[le], -lp.rhs[ge]])
        kw = {}
        if A_ub.shape[0]:
            kw.update(A_ub=A_ub, b_ub=b_ub)
        if eq.any():
            kw.update(A_eq=A[eq], b_eq=lp.rhs[eq])
        bounds = np.column_stack([self._lo, self._hi])
        bounds = [(None if not np.isfinite(a) else a, None if not np.isfinite(b) else b)
                  for a, b in bounds]
        t0 = time.perf_counter_ns()
        res = linprog(sign * self._c, bounds=bounds, method=self.method, **kw)
        dt = time.perf_counter_ns() - t0
        status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status)
        if status is None:
            from .simplex import NumericalError
            raise NumericalError(f"HiGHS failed: {res.message}")
        x = np.asarray(res.x, dtype=float) if status == "optimal" else np.full(lp.num_vars, np.nan)
        obj = float(self._c @ x) if status == "optimal" else float("nan")
        return Solution(status, x, obj, dt, int(getattr(res, "nit", 0) or 0))


def make_backend(name: str = "simplex", **kw):
    if name == "simplex":
        return SimplexBackend(**kw)
    if name == "highs":
        return HighsBackend(**kw)
    raise ValueError(f"unknown backend {name!r}")
