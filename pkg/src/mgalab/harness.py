"""End-to-end MGA runs: base solve, budget, proposal/solve loop, metrics.

Sequential methods (HSJ) chain warm starts from one solve to the next.
Batchable methods (Random, MinMax, Hybrid, MAA stages) solve every task from
the base-optimal basis, so results do not depend on how tasks are spread
over worker processes.  Archive insertion and the shadow-sum volume update
always happen in iteration order.
"""
from __future__ import annotations

import dataclasses
import logging
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .archive import DEDUP_TOL, SolutionArchive, SolutionRecord
from .backends import make_backend
from .geometry import (MAA_DIM_CAP, DimensionCapError, HullDegenerateError, converged,
                       hull_nd, vesa, vesa_insert)
from .lp import FEAS_TOL, BudgetSpec, LinearProgram, MgaProblem, make_mga_problem, solve_with_objective
from .methods import (MAA_ANGLE_TOL_DEG, METHODS, CoverageWarning, MethodState, ObjectiveVector,
                      hsj_propose, maa_init, maa_propose, minmax_propose_batch, random_propose,
                      hybrid_schedule)
from .testbeds import TestbedSpec, random_lp, reference_3d

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid or incompatible experiment configuration."""


class RunFailure(RuntimeError):
    """A solve failed; carries what is needed to replay it."""

    def __init__(self, message: str, iteration: int, weights):
        super().__init__(f"{message} (iteration {iteration}, objective {list(map(float, weights))})")
        self.iteration = iteration
        self.weights = np.asarray(weights, dtype=float)


# -- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceConfig:
    window: int = 10
    rel_threshold: float = 0.01
    enabled: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    testbed: TestbedSpec = field(default_factory=TestbedSpec)
    method: str = "hsj"
    method_params: dict = field(default_factory=dict)
    budget: BudgetSpec = field(default_factory=lambda: BudgetSpec("relative", 0.1))
    iterations: int = 10
    seeds: tuple[int, ...] = (0,)
    workers: int = 1
    batch_size: int | None = None  # default workers * 4
    dedup_tol: float = DEDUP_TOL
    convergence: ConvergenceConfig = field(default_factory=ConvergenceConfig)
    backend: str = "simplex"
    run_id: str | None = None

    _METHOD_PARAMS = {
        "hsj": {"nonzero_tol", "tie_break"},
        "random": {"tie_break"},
        "minmax": {"tie_break"},
        "maa": {"angle_tol_deg", "max_init_iters", "dim_cap", "tie_break"},
        "hybrid": {"brackets", "extra", "tie_break"},
    }

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ConfigError(f"method: unknown method {self.method!r} (choose from {METHODS})")
        if self.iterations < 1:
            raise ConfigError("iterations: must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers: must be >= 1")
        if self.batch_size is not None and self.batch_size < 1:
            raise ConfigError("batch_size: must be >= 1")
        if not self.dedup_tol > 0:
            raise ConfigError("dedup_tol: must be > 0")
        if not self.seeds:
            raise ConfigError("seeds: need at least one seed")
        if self.backend not in ("simplex", "highs"):
            raise ConfigError(f"backend: unknown backend {self.backend!r}")
        bad = set(self.method_params) - self._METHOD_PARAMS[self.method]
        if bad:
            raise ConfigError(f"method_params: unknown key(s) {sorted(bad)} for {self.method}")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))

    @property
    def effective_batch(self) -> int:
        return self.batch_size if self.batch_size is not None else 4 * self.workers

    # JSON mirroring -----------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        if "testbed" in d:
            d["testbed"] = _build(TestbedSpec, d["testbed"], "testbed")
        if "budget" in d:
            d["budget"] = _build(BudgetSpec, d["budget"], "budget")
        if "convergence" in d:
            d["convergence"] = _build(ConvergenceConfig, d["convergence"], "convergence")
        try:
            return cls(**d)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["seeds"] = list(self.seeds)
        tb = out["testbed"]
        tb["c_range"], tb["b_fraction"] = list(tb["c_range"]), list(tb["b_fraction"])
        return out

    def replace(self, **kw) -> "ExperimentConfig":
        return dataclasses.replace(self, **kw)


def _build(cls, value, key: str):
    if isinstance(value, cls):
        return value
    if not isinstance(value, dict):
        raise ConfigError(f"{key}: expected an object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(value) - names
    if unknown:
        raise ConfigError(f"unknown {key} key(s): {sorted(f'{key}.{k}' for k in unknown)}")
    v = dict(value)
    for k in ("c_range", "b_fraction"):
        if k in v:
            v[k] = tuple(v[k])
    try:
        return cls(**v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: {exc}") from exc


# -- testbeds ----------------------------------------------------------------

@dataclass
class Testbed:
    __test__ = False

    lp: LinearProgram
    mga_vars: tuple[int, ...]
    instance_seed: int | None
    model: object | None = None  # CapacityModel for toy_cem


def build_testbed(spec: TestbedSpec, seed: int) -> Testbed:
    inst = spec.seed if spec.seed is not None else seed
    if spec.kind == "reference3d":
        lp = reference_3d()
        return Testbed(lp, tuple(range(lp.num_vars)), None)
    if spec.kind == "random_lp":
        lp = random_lp(spec.dimension, inst, c_range=spec.c_range, b_fraction=spec.b_fraction)
        return Testbed(lp, tuple(range(lp.num_vars)), inst)
    from .cem import select_mga_vars, toy_cem
    model = toy_cem(dataclasses.replace(spec, seed=inst))
    return Testbed(model.lp, select_mga_vars(model, spec.mga_mode), inst, model)


# -- report ------------------------------------------------------------------

@dataclass
class RunRow:
    iteration: int
    method: str
    formulate_ns: int
    solve_ns: int
    wall_ns: int
    cost: float
    unique: bool
    vesa_total: float
    objective: np.ndarray
    point: np.ndarray
    tag: str = ""


@dataclass
class RunReport:
    run_id: str
    method: str
    seed: int
    config: dict
    dim: int
    mga_vars: tuple[int, ...]
    optimal_value: float
    budget: float
    base_point: np.ndarray
    rows: list[RunRow]
    summary: dict
    archive: SolutionArchive | None = field(default=None, repr=False)
    instance_seed: int | None = None

    @property
    def vesa_trajectory(self) -> list[float]:
        return [r.vesa_total for r in self.rows]

    def unique_points(self) -> np.ndarray:
        pts = [r.point for r in self.rows if r.unique]
        return np.array(pts) if pts else np.zeros((0, self.dim))

    def points(self) -> np.ndarray:
        """Base point followed by every row's point."""
        return np.vstack([self.base_point[None, :]] + [r.point[None, :] for r in self.rows])


def new_solution_efficiency(report: RunReport) -> float:
    if not report.rows:
        raise ValueError("report has no iterations")
    return sum(r.unique for r in report.rows) / len(report.rows)


def _summarize(report: RunReport, *, converged_at, terminated: str, warn: list[str],
               duplicate_vectors: int = 0) -> dict:
    rows = report.rows
    tol = FEAS_TOL * max(1.0, abs(report.budget))
    uniq = sum(r.unique for r in rows)
    return {
        "iterations": len(rows),
        "unique_count": uniq,
        "efficiency": uniq / len(rows) if rows else 0.0,
        "total_wall_ns": int(sum(r.wall_ns for r in rows)),
        "converged_at": converged_at,
        "vesa_final": rows[-1].vesa_total if rows else 0.0,
        "mean_formulate_ns": float(np.mean([r.formulate_ns for r in rows])) if rows else 0.0,
        "mean_solve_ns": float(np.mean([r.solve_ns for r in rows])) if rows else 0.0,
        "budget_violations": int(sum(r.cost > report.budget + tol for r in rows)),
        "duplicate_vectors": int(duplicate_vectors),
        "terminated": terminated,
        "warnings": list(warn),
    }


# -- worker plumbing ---------------------------------------------------------

_WORKER: dict = {}


def _init_worker(p: MgaProblem, basis, backend: str, tie_break: bool) -> None:
    be = make_backend(backend)
    be.load(p.lp)
    _WORKER.update(p=p, basis=basis, be=be, tie_break=tie_break)


def _solve_task(weights: np.ndarray):
    t0 = time.perf_counter_ns()
    sol = solve_with_objective(_WORKER["p"], weights, _WORKER["be"], basis=_WORKER["basis"],
                               tie_break=_WORKER["tie_break"])
    return sol.status, sol.values, max(1, sol.solve_wall_time), time.perf_counter_ns() - t0


class _Pool:
    """Solves batches of objective vectors from a fixed basis, in order."""

    def __init__(self, p: MgaProblem, basis, backend: str, tie_break: bool, workers: int):
        self.workers = workers
        self.args = (p, basis, backend, tie_break)
        self.ex = None
        if workers > 1:
            self.ex = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=self.args)
        else:
            _init_worker(*self.args)

    def map(self, weights: list[np.ndarray]) -> list:
        if self.ex is None:
            if _WORKER.get("p") is not self.args[0]:
                _init_worker(*self.args)
            return [_solve_task(w) for w in weights]
        return list(self.ex.map(_solve_task, weights))

    def close(self) -> None:
        if self.ex is not None:
            self.ex.shutdown()


# -- the run loop ------------------------------------------------------------

class _Recorder:
    """Archive + VESA + per-iteration rows, always fed in iteration order."""

    def __init__(self, p: MgaProblem, method: str, dedup_tol: float):
        self.p, self.method = p, method
        self.archive = SolutionArchive(dedup_tol)
        base = p.base_point
        self.archive.set_base(SolutionRecord(base, p.project(base), p.cost(base), tag="base"))
        self.est = vesa(p.project(base)[None, :], p.dim) if p.dim >= 2 else None
        self.rows: list[RunRow] = []

    @property
    def n(self) -> int:
        return len(self.rows)

    def add(self, w: ObjectiveVector, status, values, formulate_ns, solve_ns, task_ns, tag=""):
        it = self.n + 1
        if status != "optimal":
            raise RunFailure(f"MGA solve returned {status}", it, w.weights)
        t0 = time.perf_counter_ns()
        point = self.p.project(values)
        rec = SolutionRecord(values, point, self.p.cost(values), w, it, formulate_ns, solve_ns,
                             tag=tag or w.method)
        self.archive.add(rec)
        if self.est is not None:
            self.est = vesa_insert(self.est, point)
        rec.wall_ns = formulate_ns + task_ns + (time.perf_counter_ns() - t0)
        rec.wall_ns = max(rec.wall_ns, formulate_ns + solve_ns)
        self.rows.append(RunRow(it, self.method, formulate_ns, solve_ns, rec.wall_ns, rec.cost,
                                rec.unique, self.est.total if self.est is not None else 0.0,
                                w.weights, point, rec.tag))

    def add_record(self, rec: SolutionRecord) -> None:
        """Insert a record solved elsewhere (MAA initialization)."""
        self.add(rec.objective, "optimal", rec.values, rec.formulate_ns, rec.solve_ns,
                 max(rec.wall_ns - rec.formulate_ns, rec.solve_ns), tag=rec.tag)


def _timed(fn, *a, **kw):
    t0 = time.perf_counter_ns()
    out = fn(*a, **kw)
    return out, max(1, time.perf_counter_ns() - t0)


def run(config: ExperimentConfig, seed: int | None = None) -> RunReport:
    """One seeded MGA run of ``config``."""
    seed = config.seeds[0] if seed is None else int(seed)
    mp = config.method_params
    tie_break = bool(mp.get("tie_break", True))
    tb = build_testbed(config.testbed, seed)
    dim = len(tb.mga_vars)
    cap = int(mp.get("dim_cap", MAA_DIM_CAP))
    if config.method == "maa" and dim > cap:
        raise DimensionCapError(f"MAA limited to {cap} MGA dimensions, got {dim}")
    warn: list[str] = []
    if dim < 2:
        warn.append("fewer than two MGA variables: volume estimate not defined, reported as 0")

    be = make_backend(config.backend)
    be.load(tb.lp)
    base = be.solve()
    if not base.optimal:
        raise RunFailure(f"base problem is {base.status}", 0, np.zeros(dim))
    p = make_mga_problem(tb.lp, base, config.budget, tb.mga_vars)
    base_basis = base.basis.extend(1) if base.basis is not None else None
    rng = np.random.default_rng(seed)
    rec = _Recorder(p, config.method, config.dedup_tol)
    conv = config.convergence
    converged_at = None
    terminated = "iterations"

    def check_convergence() -> bool:
        nonlocal converged_at
        if not conv.enabled:
            return False
        traj = [r.vesa_total for r in rec.rows]
        if converged(traj, conv.window, conv.rel_threshold):
            converged_at = rec.n
            return True
        return False

    if config.method == "hsj":
        if config.workers > 1:
            warn.append("HSJ is sequential; ran with a single worker")
        state = MethodState("hsj", dim, rng, nonzero_tol=float(mp.get("nonzero_tol", 1e-6)))
        solver = make_backend(config.backend)
        solver.load(p.lp)
        basis = base_basis
        while rec.n < config.iterations:
            w, f_ns = _timed(hsj_propose, state, rec.archive)
            w.iteration = rec.n + 1
            t0 = time.perf_counter_ns()
            sol = solve_with_objective(p, w, solver, basis=basis, tie_break=tie_break)
            task = time.perf_counter_ns() - t0
            rec.add(w, sol.status, sol.values, f_ns, max(1, sol.solve_wall_time), task)
            basis = sol.basis if sol.basis is not None else basis
            if check_convergence():
                terminated = "converged"
                break
    else:
        pool = _Pool(p, base_basis, config.backend, tie_break, config.workers)
        try:
            if config.method == "maa":
                terminated, converged_at = _run_maa(config, p, rng, rec, pool, base_basis,
                                                     tie_break, check_convergence, warn)
            else:
                vectors, f_times = _pregenerate(config, dim, rng, warn)
                if len(vectors) < config.iterations and config.method == "minmax":
                    terminated = "sign-space-exhausted"
                batch = config.effective_batch
                for start in range(0, len(vectors), batch):
                    chunk = vectors[start:start + batch]
                    results = pool.map([v.weights for v in chunk])
                    for v, f_ns, (status, x, s_ns, task) in zip(chunk, f_times[start:], results):
                        rec.add(v, status, x, f_ns, s_ns, task)
                    if check_convergence():
                        terminated = "converged"
                        break
        finally:
            pool.close()

    report = RunReport(
        run_id=config.run_id or f"{config.method}-s{seed}",
        method=config.method, seed=seed, config=config.to_dict(), dim=dim,
        mga_vars=tuple(tb.mga_vars), optimal_value=p.optimal_value, budget=p.budget,
        base_point=p.project(p.base_point), rows=rec.rows, summary={}, archive=rec.archive,
        instance_seed=tb.instance_seed)
    report.summary = _summarize(report, converged_at=converged_at, terminated=terminated, warn=warn)
    return report


def _pregenerate(config: ExperimentConfig, dim: int, rng, warn: list[str]):
    """Whole-run proposal list with per-vector formulation times."""
    n = config.iterations
    vectors: list[ObjectiveVector] = []
    times: list[int] = []
    if config.method == "random":
        state = MethodState("random", dim, rng)
        for _ in range(n):
            v, t = _timed(random_propose, state, dim)
            vectors.append(v)
            times.append(t)
    elif config.method == "minmax":
        state = MethodState("minmax", dim, rng)
        space = 3 ** dim - 1 if dim < 40 else None
        if space is not None and n > space:
            warn.append(f"only {space} sign vectors exist in dimension {dim}; "
                        f"run stops after {space} iterations")
            n = space
        t0 = time.perf_counter_ns()
        vectors = minmax_propose_batch(state, dim, n)
        per = max(1, (time.perf_counter_ns() - t0) // max(n, 1))
        times = [per] * len(vectors)
    else:  # hybrid
        mp = config.method_params
        brackets = mp.get("brackets")
        t0 = time.perf_counter_ns()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", CoverageWarning)
            vectors = hybrid_schedule(dim, n, brackets, rng, extra=mp.get("extra", ()))
        warn.extend(str(c.message) for c in caught if issubclass(c.category, CoverageWarning))
        per = max(1, (time.perf_counter_ns() - t0) // max(len(vectors), 1))
        times = [per] * len(vectors)
    for k, v in enumerate(vectors, 1):
        v.iteration = k
    return vectors, times


def _run_maa(config, p, rng, rec: _Recorder, pool: _Pool, base_basis, tie_break,
             check_convergence, warn):
    mp = config.method_params
    max_init = int(mp.get("max_init_iters", 50))
    init_backend = make_backend(config.backend)
    init_backend.load(p.lp)
    archive = maa_init(p, rng, backend=init_backend, basis=base_basis,
                       max_init_iters=max_init, dim_cap=int(mp.get("dim_cap", MAA_DIM_CAP)),
                       dedup_tol=config.dedup_tol, tie_break=tie_break)
    for r in archive.records:
        if rec.n >= config.iterations:
            warn.append("iteration limit reached during MAA initialization")
            return "iterations", None
        rec.add_record(r)
    if check_convergence():
        return "converged", rec.n
    state = MethodState("maa", p.dim, rng)
    tol = float(mp.get("angle_tol_deg", MAA_ANGLE_TOL_DEG))
    stage = 0
    while rec.n < config.iterations:
        stage += 1
        t0 = time.perf_counter_ns()
        try:
            hull = hull_nd(rec.archive.distinct_points(), p.dim,
                           cap=int(mp.get("dim_cap", MAA_DIM_CAP)))
        except HullDegenerateError as exc:
            raise RunFailure(f"MAA hull degenerate at stage {stage}: {exc}", rec.n + 1,
                             np.zeros(p.dim)) from exc
        proposals = maa_propose(state, rec.archive, hull, tol)
        stage_ns = time.perf_counter_ns() - t0
        if not proposals:
            return "no-new-normals", None
        proposals = proposals[:config.iterations - rec.n]
        # hull + dedup cost is shared by every vector of the stage
        f_ns = max(1, stage_ns // len(proposals))
        for k, v in enumerate(proposals):
            v.iteration = rec.n + 1 + k
        results = pool.map([v.weights for v in proposals])
        for v, (status, x, s_ns, task) in zip(proposals, results):
            rec.add(v, status, x, f_ns, s_ns, task, tag=f"maa-stage{stage}")
        if check_convergence():
            return "converged", rec.n
    return "iterations", None


# -- merging and sweeps ------------------------------------------------------

def merge_reports(a: RunReport, b: RunReport, *, dedup_tol: float | None = None) -> RunReport:
    """Superimpose two runs on the same near-optimal region."""
    same = (a.mga_vars == b.mga_vars and a.dim == b.dim
            and abs(a.budget - b.budget) <= 1e-9 * max(1.0, abs(a.budget))
            and a.config.get("testbed", {}).get("kind") == b.config.get("testbed", {}).get("kind")
            and a.instance_seed == b.instance_seed
            and np.allclose(a.base_point, b.base_point, atol=1e-9))
    if not same:
        raise ConfigError("reports come from different testbeds, budgets or MGA variable sets")
    tol = dedup_tol or min(a.config.get("dedup_tol", DEDUP_TOL), b.config.get("dedup_tol", DEDUP_TOL))
    seen_vectors = {tuple(np.round(r.objective, 12)) for r in a.rows}
    dup = sum(tuple(np.round(r.objective, 12)) in seen_vectors for r in b.rows)
    archive = SolutionArchive(tol)
    est = vesa(a.base_point[None, :], a.dim) if a.dim >= 2 else None
    rows: list[RunRow] = []
    for r in list(a.rows) + list(b.rows):
        rec = SolutionRecord(r.point, r.point, r.cost)
        unique = archive.add(rec)
        if est is not None:
            est = vesa_insert(est, r.point)
        rows.append(dataclasses.replace(r, iteration=len(rows) + 1, unique=unique,
                                        vesa_total=est.total if est is not None else 0.0))
    methods = a.method if a.method == b.method else f"{a.method}+{b.method}"
    merged = RunReport(f"{a.run_id}+{b.run_id}", methods, a.seed, a.config, a.dim, a.mga_vars,
                       a.optimal_value, a.budget, a.base_point, rows, {}, archive, a.instance_seed)
    warn = []
    if dup:
        warn.append(f"{dup} objective vector(s) appear in both runs")
    merged.summary = _summarize(merged, converged_at=None, terminated="merged", warn=warn,
                                duplicate_vectors=dup)
    return merged


SWEEP_FIELDS = ("method", "testbed", "dimension", "seed", "status", "error", "iterations",
                "unique_count", "efficiency", "vesa_final", "mean_formulate_ns",
                "mean_solve_ns", "total_wall_ns", "converged_at")


def sweep(configs, seeds=None) -> list[dict]:
    """Long-format comparison table, one row per (config, seed).

    Failures are recorded per row; a MAA request above its dimension cap is
    recorded as ``refused``.
    """
    rows = []
    for cfg in configs:
        for seed in (cfg.seeds if seeds is None else seeds):
            row = {"method": cfg.method, "testbed": cfg.testbed.kind,
                   "dimension": cfg.testbed.dimension if cfg.testbed.kind == "random_lp" else None,
                   "seed": int(seed), "status": "ok", "error": ""}
            try:
                rep = run(cfg, seed)
            except DimensionCapError as exc:
                row.update(status="refused", error=str(exc))
            except Exception as exc:  # noqa: BLE001 - a sweep records and continues
                log.warning("sweep run %s seed %s failed: %s", cfg.method, seed, exc)
                row.update(status="failed", error=f"{type(exc).__name__}: {exc}")
            else:
                row["dimension"] = rep.dim
                s = rep.summary
                row.update({k: s[k] for k in ("iterations", "unique_count", "efficiency",
                                              "vesa_final", "mean_formulate_ns",
                                              "mean_solve_ns", "total_wall_ns", "converged_at")})
            rows.append({k: row.get(k) for k in SWEEP_FIELDS})
    return rows


# -- dispatch audit ----------------------------------------------------------

AUDIT_FIELDS = ("mode", "seed", "iteration", "cost", "variable_cost_mga",
                "variable_cost_redispatch", "variable_cost_error_pct", "emissions_mga",
                "emissions_redispatch", "emissions_error_pct")


def dispatch_audit(spec: TestbedSpec | None = None, *, mode: str = "capacity",
                   iterations: int = 20, seed: int = 0,
                   budget: BudgetSpec = BudgetSpec("relative", 0.1)) -> list[dict]:
    """Random-vector MGA on the toy capacity model, each solution redispatched.

    Returns one row per iteration with the percent excess operating cost and
    emissions of the MGA dispatch over least-cost redispatch.
    """
    from .cem import redispatch_audit

    spec = spec or TestbedSpec("toy_cem")
    if spec.kind != "toy_cem":
        raise ConfigError("dispatch audit needs a toy_cem testbed")
    tb = build_testbed(dataclasses.replace(spec, mga_mode=mode), seed)
    be = make_backend("simplex")
    be.load(tb.lp)
    base = be.solve()
    if not base.optimal:
        raise RunFailure(f"base problem is {base.status}", 0, np.zeros(len(tb.mga_vars)))
    p = make_mga_problem(tb.lp, base, budget, tb.mga_vars)
    basis = base.basis.extend(1)
    state = MethodState("random", p.dim, np.random.default_rng(seed))
    solver = make_backend("simplex")
    rows = []
    for it in range(1, iterations + 1):
        w = random_propose(state, p.dim)
        sol = solve_with_objective(p, w, solver, basis=basis)
        if not sol.optimal:
            raise RunFailure(f"MGA solve returned {sol.status}", it, w.weights)
        a = redispatch_audit(tb.model, sol, p)
        rows.append({"mode": mode, "seed": seed, "iteration": it, "cost": p.cost(sol.values),
                     "variable_cost_mga": a.variable_cost_mga,
                     "variable_cost_redispatch": a.variable_cost_redispatch,
                     "variable_cost_error_pct": a.variable_cost_error,
                     "emissions_mga": a.emissions_mga,
                     "emissions_redispatch": a.emissions_redispatch,
                     "emissions_error_pct": a.emissions_error})
    return rows
