"""LP data model, budget construction and MGA sub-problem solves."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

#: Absolute per-row feasibility tolerance used across the package.
FEAS_TOL = 1e-6

RELATIONS = ("<=", ">=", "=")


class LPError(ValueError):
    """Malformed linear program."""


class DegenerateBudgetError(ValueError):
    """Relative budget on a non-positive optimum does not widen the region."""


class InternalSolverError(RuntimeError):
    """A solve returned a status that the problem structure rules out."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``min|max c.x`` subject to ``A x (rel) b`` and ``lo <= x <= hi``.

    ``A`` is kept as a CSR matrix; ``relations`` holds one of ``<=``, ``>=``
    or ``=`` per row.  Instances are immutable.
    """

    num_vars: int
    objective: np.ndarray
    A: sp.csr_matrix
    relations: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sense: str = "min"
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        n = int(self.num_vars)
        A = sp.csr_matrix(self.A, dtype=float)
        if A.shape[0] == 0:
            A = sp.csr_matrix((0, n))
        if A.shape[1] != n:
            raise LPError(f"constraint matrix has {A.shape[1]} columns, expected {n}")
        A.sum_duplicates()
        A.eliminate_zeros()
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "objective", _frozen(np.broadcast_to(self.objective, (n,))))
        object.__setattr__(self, "rhs", _frozen(np.asarray(self.rhs, dtype=float).reshape(-1)))
        object.__setattr__(self, "lower", _frozen(np.broadcast_to(self.lower, (n,))))
        object.__setattr__(self, "upper", _frozen(np.broadcast_to(self.upper, (n,))))
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.sense not in ("min", "max"):
            raise LPError(f"sense must be 'min' or 'max', got {self.sense!r}")
        if len(self.relations) != A.shape[0] or self.rhs.shape[0] != A.shape[0]:
            raise LPError("relations/rhs length does not match the number of rows")
        bad = [r for r in self.relations if r not in RELATIONS]
        if bad:
            raise LPError(f"unknown relation {bad[0]!r}")
        for name, arr in (("objective", self.objective), ("rhs", self.rhs), ("A", A.data)):
            if not np.all(np.isfinite(arr)):
                raise LPError(f"non-finite value in {name}")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise LPError("NaN bound")
        if np.any(self.lower > self.upper):
            j = int(np.argmax(self.lower > self.upper))
            raise LPError(f"lower bound exceeds upper bound for variable {j}")
        if self.names is not None and len(self.names) != n:
            raise LPError("names length does not match num_vars")

    @classmethod
    def from_dense(cls, c, A=(), relations=(), b=(), lower=0.0, upper=np.inf,
                   sense="min", names=None) -> "LinearProgram":
        c = np.asarray(c, dtype=float)
        n = c.shape[0]
        A = np.asarray(A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, n)
        if A.ndim != 2 or A.shape[1] != n:
            raise LPError(f"constraint matrix has shape {A.shape}, expected (m, {n})")
        return cls(n, c, sp.csr_matrix(A), tuple(relations), np.asarray(b, dtype=float),
                   lower, upper, sense, names)

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def constraints(self) -> Iterator[tuple[np.ndarray, np.ndarray, str, float]]:
        """Rows as ``(indices, coefficients, relation, rhs)``."""
        A = self.A
        for i in range(A.shape[0]):
            lo, hi = A.indptr[i], A.indptr[i + 1]
            yield A.indices[lo:hi].copy(), A.data[lo:hi].copy(), self.relations[i], float(self.rhs[i])

    @cached_property
    def min_objective(self) -> np.ndarray:
        """Objective in minimization form."""
        return _frozen(self.objective if self.sense == "min" else -self.objective)

    def with_row(self, coeffs: np.ndarray, relation: str, rhs: float) -> "LinearProgram":
        row = sp.csr_matrix(np.asarray(coeffs, dtype=float).reshape(1, -1))
        return LinearProgram(self.num_vars, self.objective, sp.vstack([self.A, row], format="csr"),
                             self.relations + (relation,), np.append(self.rhs, rhs),
                             self.lower, self.upper, self.sense, self.names)

    def with_objective(self, c: np.ndarray, sense: str | None = None) -> "LinearProgram":
        return LinearProgram(self.num_vars, c, self.A, self.relations, self.rhs,
                             self.lower, self.upper, sense or self.sense, self.names)

    def with_bounds(self, index: Sequence[int], lower, upper) -> "LinearProgram":
        lo = np.array(self.lower)
        hi = np.array(self.upper)
        lo[list(index)] = lower
        hi[list(index)] = upper
        return LinearProgram(self.num_vars, self.objective, self.A, self.relations, self.rhs,
                             lo, hi, self.sense, self.names)

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Signed violation per row (positive means violated) and per bound."""
        ax = self.A @ x
        v = np.zeros(self.num_rows)
        rel = np.array(self.relations)
        le, ge, eq = rel == "<=", rel == ">=", rel == "="
        v[le] = ax[le] - self.rhs[le]
        v[ge] = self.rhs[ge] - ax[ge]
        v[eq] = np.abs(ax[eq] - self.rhs[eq])
        with np.errstate(invalid="ignore"):
            vb = np.maximum(self.lower - x, x - self.upper)
        return np.concatenate([v, np.nan_to_num(vb, nan=0.0)])

    def is_feasible(self, x: np.ndarray, tol: float = FEAS_TOL) -> bool:
        return bool(np.all(self.residuals(np.asarray(x, dtype=float)) <= tol))

    def active_count(self, x: np.ndarray, tol: float = FEAS_TOL) -> int:
        """Number of constraint rows and bounds holding with equality at ``x``."""
        ax = self.A @ x
        rows = int(np.sum(np.abs(ax - self.rhs) <= tol))
        bounds = int(np.sum(np.abs(x - self.lower) <= tol) + np.sum(np.abs(x - self.upper) <= tol))
        return rows + bounds


@dataclass
class Solution:
    status: str  # optimal | infeasible | unbounded
    values: np.ndarray
    objective_value: float
    solve_wall_time: int  # nanoseconds
    iterations: int = 0
    basis: "object | None" = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


@dataclass(frozen=True)
class BudgetSpec:
    mode: str = "relative"  # relative | absolute
    amount: float = 0.1

    def __post_init__(self) -> None:
        if self.mode not in ("relative", "absolute"):
            raise ValueError(f"budget mode must be 'relative' or 'absolute', got {self.mode!r}")
        if not (self.amount >= 0 and np.isfinite(self.amount)):
            raise ValueError("budget amount must be a finite number >= 0")

    def resolve(self, optimal_value: float, sense: str = "min") -> float:
        """Budget bound on the minimization-form objective."""
        z = optimal_value if sense == "min" else -optimal_value
        if self.mode == "absolute":
            return z + self.amount
        if optimal_value <= 0:
            raise DegenerateBudgetError(
                f"relative slack on optimum {optimal_value!r} does not widen the feasible region")
        return z + self.amount * abs(z)


@dataclass(frozen=True, eq=False)
class MgaProblem:
    """Base LP, its optimum and the near-optimal budget bound.

    ``budget`` bounds the minimization-form objective: every alternative
    satisfies ``budget_row . x <= budget``.
    """

    base: LinearProgram
    optimal_value: float
    budget: float
    mga_vars: tuple[int, ...]
    base_point: np.ndarray | None = None

    def __post_init__(self) -> None:
        k = tuple(int(i) for i in self.mga_vars)
        if not k:
            raise ValueError("mga_vars must be non-empty")
        if len(set(k)) != len(k):
            raise ValueError("mga_vars contains duplicate indices")
        if min(k) < 0 or max(k) >= self.base.num_vars:
            raise ValueError("mga_vars index out of range")
        object.__setattr__(self, "mga_vars", k)
        z = self.optimal_value if self.base.sense == "min" else -self.optimal_value
        if self.budget < z - 1e-12 * max(1.0, abs(z)):
            raise ValueError("budget is below the optimal value")

    @property
    def dim(self) -> int:
        return len(self.mga_vars)

    @property
    def budget_row(self) -> np.ndarray:
        return self.base.min_objective

    @cached_property
    def lp(self) -> LinearProgram:
        """Base constraints plus the budget row; objective is zero until set."""
        return self.base.with_row(self.budget_row, "<=", self.budget).with_objective(
            np.zeros(self.base.num_vars), "min")

    def objective(self, weights: np.ndarray) -> np.ndarray:
        w = np.asarray(weights, dtype=float)
        if w.shape != (self.dim,):
            raise ValueError(f"objective has {w.shape[0] if w.ndim else 0} weights, expected {self.dim}")
        c = np.zeros(self.base.num_vars)
        c[list(self.mga_vars)] = w
        return c

    def project(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[list(self.mga_vars)]

    def cost(self, x: np.ndarray) -> float:
        return float(self.budget_row @ x)

    def within_budget(self, x: np.ndarray) -> bool:
        return self.cost(x) <= self.budget + FEAS_TOL * max(1.0, abs(self.budget))


def solve(lp: LinearProgram, backend=None) -> Solution:
    """Solve ``lp`` with ``backend`` (the bundled simplex by default)."""
    if backend is None:
        from .simplex import SimplexBackend
        backend = SimplexBackend()
    backend.load(lp)
    return backend.solve()


def make_mga_problem(lp: LinearProgram, opt: Solution, budget: BudgetSpec,
                     mga_vars: Sequence[int]) -> MgaProblem:
    if not opt.optimal:
        raise ValueError(f"base solve is {opt.status}, cannot impose a budget")
    bound = budget.resolve(opt.objective_value, lp.sense)
    return MgaProblem(lp, float(opt.objective_value), float(bound), tuple(mga_vars),
                      np.array(opt.values, dtype=float))


def solve_with_objective(p: MgaProblem, w, backend=None, *, basis=None,
                         tie_break: bool = True) -> Solution:
    """Minimize ``sum_k w_k x_k`` over the budget-constrained region.

    With ``tie_break`` the backend resolves alternative optima by pushing the
    MGA variables outward (maximizing their sum over the optimal face).
    """
    weights = getattr(w, "weights", w)
    c = p.objective(weights)
    if backend is None:
        from .simplex import SimplexBackend
        backend = SimplexBackend()
    if getattr(backend, "problem", None) is not p.lp:
        backend.load(p.lp)
    backend.set_objective(c)
    if tie_break and hasattr(backend, "set_secondary"):
        sec = np.zeros(p.base.num_vars)
        sec[list(p.mga_vars)] = -1.0
        backend.set_secondary(sec)
    if basis is not None:
        backend.basis = basis
    sol = backend.solve()
    if sol.status == "unbounded":
        lo, hi = p.base.lower[list(p.mga_vars)], p.base.upper[list(p.mga_vars)]
        if np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)):
            raise InternalSolverError("unbounded MGA solve on a box-bounded MGA space")
    return sol
