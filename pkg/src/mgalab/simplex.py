"""Bounded-variable revised simplex.

Rows are turned into equalities with one slack per row (``A x + s = b``);
slack bounds encode the relation.  Phase 1 adds artificials only for rows
whose slack cannot absorb the starting residual.  Pricing is Dantzig's rule
with a fall-back to Bland's rule after a run of degenerate pivots, which
rules out cycling.  The basis is held either as a dense inverse (small
problems) or as a sparse LU plus product-form eta updates.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .lp import LinearProgram, Solution

BASIC, LOWER, UPPER, FREE = 0, 1, 2, 3


class NumericalError(RuntimeError):
    """The simplex could not make progress for numerical reasons."""


@dataclass(frozen=True)
class Basis:
    """Basic column indices plus the at-upper flag of every column.

    Columns are laid out as ``[structural (n) | row slacks (m)]``.
    """

    basic: tuple[int, ...]
    at_upper: tuple[bool, ...]

    @property
    def num_rows(self) -> int:
        return len(self.basic)

    def extend(self, new_rows: int) -> "Basis":
        """Basis for the same LP with ``new_rows`` rows appended (their slacks basic)."""
        total = len(self.at_upper)
        return Basis(self.basic + tuple(range(total, total + new_rows)),
                     self.at_upper + (False,) * new_rows)


class _DenseFactor:
    def __init__(self, B: np.ndarray):
        try:
            self.inv = np.asfortranarray(scipy.linalg.inv(B, check_finite=False))
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalError("singular basis") from exc
        if not np.all(np.isfinite(self.inv)):
            raise NumericalError("singular basis")
        self.updates = 0

    def ftran(self, rows: np.ndarray, vals: np.ndarray) -> np.ndarray:
        return self.inv[:, rows] @ vals

    def solve(self, v: np.ndarray) -> np.ndarray:
        return self.inv @ v

    def btran(self, c: np.ndarray) -> np.ndarray:
        return c @ self.inv

    def update(self, r: int, alpha: np.ndarray) -> None:
        row = self.inv[r] / alpha[r]
        self.inv = scipy.linalg.blas.dger(-1.0, alpha, row, a=self.inv, overwrite_a=True)
        self.inv[r] = row
        self.updates += 1


class _LUFactor:
    def __init__(self, B: sp.csc_matrix):
        try:
            self.lu = spla.splu(sp.csc_matrix(B), permc_spec="COLAMD")
        except RuntimeError as exc:
            raise NumericalError("singular basis") from exc
        self.m = B.shape[0]
        self.etas: list[tuple[int, np.ndarray]] = []
        self.updates = 0

    def solve(self, v: np.ndarray) -> np.ndarray:
        v = self.lu.solve(np.asarray(v, dtype=float))
        for r, al in self.etas:
            vr = v[r] / al[r]
            v -= al * vr
            v[r] = vr
        return v

    def ftran(self, rows: np.ndarray, vals: np.ndarray) -> np.ndarray:
        v = np.zeros(self.m)
        v[rows] = vals
        return self.solve(v)

    def btran(self, c: np.ndarray) -> np.ndarray:
        w = np.array(c, dtype=float)
        for r, al in reversed(self.etas):
            w[r] = (w[r] - (w @ al - w[r] * al[r])) / al[r]
        return self.lu.solve(w, trans="T")

    def update(self, r: int, alpha: np.ndarray) -> None:
        self.etas.append((r, alpha.copy()))
        self.updates += 1


class SimplexBackend:
    """Bundled solver backend.

    ``load`` an LP, optionally ``set_objective``/``set_secondary``, then
    ``solve``.  With ``warm_start`` the final basis of one solve seeds the
    next; an explicit ``basis`` assignment seeds exactly one solve.

    A secondary objective is optimized over the optimal face of the primary
    one (lexicographic tie-breaking among alternative optima).
    """

    dense_limit = 150

    def __init__(self, *, warm_start: bool = False, max_iter: int = 100_000,
                 refactor_every: int = 80, bland_after: int = 40,
                 tol: float = 1e-9):
        self.warm_start = warm_start
        self.max_iter = max_iter
        self.refactor_every = refactor_every
        self.bland_after = bland_after
        self.tol = tol
        self.problem: LinearProgram | None = None
        self._basis: Basis | None = None
        self._secondary: np.ndarray | None = None

    # -- contract ---------------------------------------------------------
    def load(self, lp: LinearProgram) -> None:
        self.problem = lp
        n, m = lp.num_vars, lp.num_rows
        self.n, self.m = n, m
        self.A = sp.hstack([lp.A, sp.identity(m, format="csr")], format="csc")
        self.AT = self.A.T.tocsr()
        rel = np.array(lp.relations, dtype=object)
        slo = np.where(rel == ">=", -np.inf, 0.0)
        shi = np.where(rel == "<=", np.inf, 0.0)
        self.lo = np.concatenate([lp.lower, slo]).astype(float)
        self.hi = np.concatenate([lp.upper, shi]).astype(float)
        self.b = np.array(lp.rhs, dtype=float)
        self._sign = 1.0 if lp.sense == "min" else -1.0
        self.c = np.zeros(n + m)
        self.c[:n] = self._sign * lp.objective
        self._user_c = np.array(lp.objective, dtype=float)
        self._secondary = None
        self._basis = None

    def set_objective(self, c: np.ndarray) -> None:
        c = np.asarray(c, dtype=float)
        if c.shape != (self.n,):
            raise ValueError(f"objective length {c.shape} != ({self.n},)")
        self._user_c = c.copy()
        self.c = np.zeros(self.n + self.m)
        self.c[:self.n] = self._sign * c

    def set_secondary(self, c2: np.ndarray | None) -> None:
        """Tie-break objective (minimization form) or ``None``."""
        if c2 is None:
            self._secondary = None
            return
        c2 = np.asarray(c2, dtype=float)
        self._secondary = np.concatenate([c2, np.zeros(self.m)])

    def set_bounds(self, index, lower, upper) -> None:
        idx = np.atleast_1d(np.asarray(index, dtype=int))
        self.lo[idx] = lower
        self.hi[idx] = upper

    @property
    def basis(self) -> Basis | None:
        return self._basis

    @basis.setter
    def basis(self, value: Basis | None) -> None:
        self._basis = value

    def solve(self) -> Solution:
        if self.problem is None:
            raise RuntimeError("no problem loaded")
        t0 = time.perf_counter_ns()
        run = _Run(self)
        status = run.execute(self._basis)
        x = run.x[:self.n].copy()
        basis = run.export_basis() if status == "optimal" else None
        if self.warm_start:
            self._basis = basis
        else:
            self._basis = None
        obj = float(self._user_c @ x) if status == "optimal" else float("nan")
        return Solution(status, x, obj, time.perf_counter_ns() - t0, run.iterations, basis)


class _Run:
    """State of one solve."""

    def __init__(self, be: SimplexBackend):
        self.be = be
        self.n, self.m = be.n, be.m
        self.A, self.AT = be.A, be.AT
        self.lo, self.hi = be.lo.copy(), be.hi.copy()
        self.b = be.b
        self.iterations = 0
        self.tol = be.tol
        self.ncols = self.n + self.m

    # -- setup ------------------------------------------------------------
    def _nonbasic_value(self, j: int, upper: bool) -> tuple[int, float]:
        lo, hi = self.lo[j], self.hi[j]
        if upper and np.isfinite(hi):
            return UPPER, hi
        if np.isfinite(lo):
            return LOWER, lo
        if np.isfinite(hi):
            return UPPER, hi
        return FREE, 0.0

    def _factor(self):
        B = self.A[:, self.basic]
        if self.m <= self.be.dense_limit:
            return _DenseFactor(B.toarray())
        return _LUFactor(B)

    def _recompute_basics(self) -> None:
        xn = self.x.copy()
        xn[self.basic] = 0.0
        self.x[self.basic] = self.F.solve(self.b - self.A @ xn)

    def _refactor(self) -> None:
        self.F = self._factor()
        self._recompute_basics()

    def _try_warm(self, basis: Basis) -> bool:
        if len(basis.basic) != self.m or len(basis.at_upper) != self.ncols:
            return False
        basic = np.asarray(basis.basic, dtype=int)
        if len(set(basic.tolist())) != self.m or (self.m and basic.max() >= self.ncols):
            return False
        self.basic = basic
        self.state = np.empty(self.ncols, dtype=np.int8)
        self.x = np.zeros(self.ncols)
        for j in range(self.ncols):
            self.state[j], self.x[j] = self._nonbasic_value(j, basis.at_upper[j])
        self.state[basic] = BASIC
        try:
            self._refactor()
        except NumericalError:
            return False
        xb = self.x[basic]
        ok = np.all(xb >= self.lo[basic] - 1e-7) and np.all(xb <= self.hi[basic] + 1e-7)
        return bool(ok) and bool(np.all(np.isfinite(xb)))

    def _cold(self) -> np.ndarray | None:
        """Slack basis plus artificials; returns the phase-1 cost or ``None``."""
        n, m = self.n, self.m
        self.state = np.empty(self.ncols, dtype=np.int8)
        self.x = np.zeros(self.ncols)
        for j in range(n):
            self.state[j], self.x[j] = self._nonbasic_value(j, False)
        r = self.b - self.A[:, :n] @ self.x[:n]
        slo, shi = self.lo[n:], self.hi[n:]
        ok = (r >= slo - 1e-9) & (r <= shi + 1e-9)
        basic = np.arange(n, n + m)
        self.state[n:] = BASIC
        self.x[n:] = r
        bad = np.flatnonzero(~ok)
        if bad.size == 0:
            self.basic = basic
            self.F = self._factor()
            return None
        # slack of an infeasible row sits at its nearest bound; an artificial
        # column (+/- e_i) carries the residual
        sval = np.clip(r[bad], slo[bad], shi[bad])
        resid = r[bad] - sval
        sign = np.where(resid >= 0, 1.0, -1.0)
        for k, i in enumerate(bad):
            self.state[n + i] = LOWER if sval[k] == slo[i] else UPPER
            self.x[n + i] = sval[k]
        k = bad.size
        art = sp.csc_matrix((sign, (bad, np.arange(k))), shape=(m, k))
        self.A = sp.hstack([self.A, art], format="csc")
        self.AT = self.A.T.tocsr()
        self.lo = np.concatenate([self.lo, np.zeros(k)])
        self.hi = np.concatenate([self.hi, np.full(k, np.inf)])
        self.state = np.concatenate([self.state, np.full(k, BASIC, dtype=np.int8)])
        self.x = np.concatenate([self.x, np.abs(resid)])
        basic[bad] = self.ncols + np.arange(k)
        self.basic = basic
        self.F = self._factor()
        cost = np.zeros(self.ncols + k)
        cost[self.ncols:] = 1.0
        return cost

    # -- main -------------------------------------------------------------
    def execute(self, basis: Basis | None) -> str:
        if self.m == 0:
            return self._bounds_only()
        warm = basis is not None and self._try_warm(basis)
        if not warm:
            self.A, self.AT = self.be.A, self.be.AT
            self.lo, self.hi = self.be.lo.copy(), self.be.hi.copy()
            p1 = self._cold()
            if p1 is not None:
                status = self._optimize(p1)
                infeas = float(self.x[self.ncols:].sum())
                if status != "optimal" or infeas > 1e-7 * max(1.0, np.abs(self.b).max(initial=0.0)):
                    return "infeasible"
                self.hi[self.ncols:] = 0.0
                self._drive_out_artificials()
        c = self._pad(self.be.c)
        status = self._optimize(c)
        if status != "optimal":
            return status
        if self.be._secondary is not None:
            self._lexicographic(c, self._pad(self.be._secondary))
        return "optimal"

    def _pad(self, c: np.ndarray) -> np.ndarray:
        extra = self.A.shape[1] - c.shape[0]
        return np.concatenate([c, np.zeros(extra)]) if extra else c

    def _bounds_only(self) -> str:
        c = self.be.c
        self.basic = np.zeros(0, dtype=int)
        self.state = np.empty(self.ncols, dtype=np.int8)
        self.x = np.zeros(self.ncols)
        for j in range(self.ncols):
            if (c[j] > 0 and np.isneginf(self.lo[j])) or (c[j] < 0 and np.isposinf(self.hi[j])):
                return "unbounded"
            self.state[j], self.x[j] = self._nonbasic_value(j, c[j] < 0)
        return "optimal"

    def _drive_out_artificials(self) -> None:
        for r in np.flatnonzero(self.basic >= self.ncols):
            e = np.zeros(self.m)
            e[r] = 1.0
            row = self.AT[:self.ncols] @ self.F.btran(e)
            row[self.basic[self.basic < self.ncols]] = 0.0
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) <= 1e-7:
                continue  # redundant row; artificial stays basic at zero
            col = self.A[:, j]
            alpha = self.F.ftran(col.indices, col.data)
            leave = self.basic[r]
            self.state[leave] = LOWER
            self.x[leave] = 0.0
            self.basic[r] = j
            self.state[j] = BASIC
            self.F.update(r, alpha)
        self._refactor()

    def export_basis(self) -> Basis | None:
        if self.m and self.basic.max() >= self.ncols:
            return None
        at_upper = tuple(bool(s == UPPER) for s in self.state[:self.ncols])
        return Basis(tuple(int(i) for i in self.basic), at_upper)

    def _lexicographic(self, c1: np.ndarray, c2: np.ndarray) -> None:
        y = self.F.btran(c1[self.basic])
        d1 = c1 - self.AT @ y
        scale = max(1.0, float(np.abs(c1).max(initial=0.0)))
        eligible = np.abs(d1) <= 1e-9 * scale
        eligible[self.basic] = True
        self._optimize(c2, eligible)

    def _optimize(self, cost: np.ndarray, eligible: np.ndarray | None = None) -> str:
        be = self.be
        dtol = self.tol * max(1.0, float(np.abs(cost).max(initial=0.0)))
        ptol = 1e-9
        lo, hi = self.lo, self.hi
        movable = hi > lo
        degenerate = 0
        bland = False
        while True:
            if self.iterations >= be.max_iter:
                raise NumericalError("iteration limit reached")
            if self.F.updates >= be.refactor_every:
                self._refactor()
            basic = self.basic
            y = self.F.btran(cost[basic])
            d = cost - self.AT @ y
            st = self.state
            cand = movable & (((st == LOWER) & (d < -dtol)) | ((st == UPPER) & (d > dtol))
                              | ((st == FREE) & (np.abs(d) > dtol)))
            if eligible is not None:
                cand &= eligible
            idx = np.flatnonzero(cand)
            if idx.size == 0:
                return "optimal"
            if bland:
                q = int(idx[0])
            else:
                q = int(idx[np.argmax(np.abs(d[idx]))])
            sigma = 1.0 if d[q] < 0 else -1.0
            col = self.A[:, q]
            alpha = self.F.ftran(col.indices, col.data)
            delta = sigma * alpha
            xb = self.x[basic]
            lb, ub = lo[basic], hi[basic]
            pos = delta > ptol
            neg = delta < -ptol
            ratio = np.full(self.m, np.inf)
            with np.errstate(invalid="ignore", divide="ignore"):
                ratio[pos] = (xb[pos] - lb[pos]) / delta[pos]
                ratio[neg] = (ub[neg] - xb[neg]) / -delta[neg]
            ratio = np.where(np.isnan(ratio), np.inf, ratio)
            t_flip = hi[q] - lo[q]
            r = -1
            if bland:
                t = ratio.min(initial=np.inf)
                if np.isfinite(t):
                    ties = np.flatnonzero(ratio <= t + 1e-12)
                    r = int(ties[np.argmin(basic[ties])])
            else:
                relaxed = np.full(self.m, np.inf)
                with np.errstate(invalid="ignore", divide="ignore"):
                    relaxed[pos] = (xb[pos] - lb[pos] + ptol) / delta[pos]
                    relaxed[neg] = (ub[neg] - xb[neg] + ptol) / -delta[neg]
                relaxed = np.where(np.isnan(relaxed), np.inf, relaxed)
                tmax = relaxed.min(initial=np.inf)
                if np.isfinite(tmax):
                    ties = np.flatnonzero(ratio <= tmax)
                    r = int(ties[np.argmax(np.abs(delta[ties]))])
                    t = ratio[r]
                else:
                    t = np.inf
            t = max(float(t), 0.0)
            self.iterations += 1
            if t_flip <= t:
                # bound flip, basis unchanged
                if not np.isfinite(t_flip):
                    return "unbounded"
                self.x[q] += sigma * t_flip
                self.x[basic] = xb - t_flip * delta
                self.state[q] = UPPER if sigma > 0 else LOWER
                degenerate = 0
                bland = False
                continue
            if r < 0:
                return "unbounded"
            leave = basic[r]
            self.x[q] += sigma * t
            self.x[basic] = xb - t * delta
            if delta[r] > 0:
                self.x[leave] = lo[leave]
                self.state[leave] = LOWER
            else:
                self.x[leave] = hi[leave]
                self.state[leave] = UPPER
            basic[r] = q
            self.state[q] = BASIC
            if eligible is not None:
                eligible[leave] = True
            self.F.update(r, alpha)
            if t <= 1e-12:
                degenerate += 1
                if degenerate >= be.bland_after:
                    bland = True
            else:
                degenerate = 0
                bland = False
