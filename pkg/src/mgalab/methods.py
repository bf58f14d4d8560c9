"""Objective-vector selection strategies.

All weight vectors follow the minimization convention: the solver minimizes
``sum_k w_k x_k`` over the MGA variables, so ``-e_k`` pushes ``x_k`` up.
"""
from __future__ import annotations

import itertools
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .archive import SolutionArchive, SolutionRecord
from .geometry import MAA_DIM_CAP, DimensionCapError, HullND, affine_rank
from .lp import MgaProblem, solve_with_objective

METHODS = ("hsj", "random", "minmax", "maa", "hybrid")

HSJ_NONZERO_TOL = 1e-6
MAA_ANGLE_TOL_DEG = 1.0
# below this many sign vectors the unissued ones are enumerated outright
_ENUMERATE_LIMIT = 3 ** 10


class SignSpaceExhausted(ValueError):
    """Not enough unissued {-1, 0, 1} vectors left for the request."""


class MaaInitError(RuntimeError):
    """Random solves never produced a full-dimensional starting simplex."""


class CoverageWarning(UserWarning):
    """Fewer bracketing runs than needed to probe every variable both ways."""


@dataclass
class ObjectiveVector:
    weights: np.ndarray
    method: str
    iteration: int | None = None
    parent_facet: int | None = None

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if not np.any(self.weights != 0):
            raise ValueError("objective vector is all zero")

    def __len__(self) -> int:
        return self.weights.shape[0]

    def key(self) -> tuple[float, ...]:
        return tuple(self.weights.tolist())


@dataclass
class MethodState:
    method: str
    dim: int
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))
    appearance_counts: np.ndarray | None = None
    used_normals: list[np.ndarray] = field(default_factory=list)
    issued_vectors: set = field(default_factory=set)
    nonzero_tol: float = HSJ_NONZERO_TOL

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.appearance_counts is None:
            self.appearance_counts = np.zeros(self.dim, dtype=np.int64)


def _points(archive) -> np.ndarray:
    if isinstance(archive, SolutionArchive):
        return archive.all_points()
    return np.asarray(archive, dtype=float)


# -- Hop-Skip-Jump -----------------------------------------------------------

def hsj_propose(state: MethodState, archive) -> ObjectiveVector:
    """Weight each variable by how many archived solutions had it nonzero.

    Counts run over every archived solution, duplicates included.
    """
    pts = _points(archive)
    if pts.size == 0:
        raise ValueError("HSJ needs at least the base solution in the archive")
    counts = np.sum(pts > state.nonzero_tol, axis=0).astype(np.int64)
    state.appearance_counts = counts
    if not counts.any():
        # nothing has appeared yet: every variable is equally unexplored
        counts = np.ones_like(counts)
    return ObjectiveVector(counts.astype(float), "hsj", iteration=len(pts))


# -- Random Vector -----------------------------------------------------------

def random_propose(state: MethodState, n: int) -> ObjectiveVector:
    """Direction drawn uniformly from the unit sphere (normalized Gaussians)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        g = state.rng.standard_normal(n)
        norm = float(np.linalg.norm(g))
        if norm > 0:
            return ObjectiveVector(g / norm, "random")


# -- Capacity Min/Max --------------------------------------------------------

def _axis_vectors(n: int):
    for k in range(n):
        for s in (1, -1):
            v = [0] * n
            v[k] = s
            yield tuple(v)


def minmax_propose_batch(state: MethodState, n: int, batch: int) -> list[ObjectiveVector]:
    """Unissued {-1, 0, 1} vectors: axis directions first, then random ones."""
    if batch < 1:
        raise ValueError("batch must be >= 1")
    space = 3 ** n - 1
    left = space - len(state.issued_vectors)
    if batch > left:
        raise SignSpaceExhausted(
            f"requested {batch} sign vectors but only {left} of {space} remain in dimension {n}")
    out: list[tuple[int, ...]] = []
    taken = set(state.issued_vectors)
    for v in _axis_vectors(n):
        if len(out) == batch:
            break
        if v not in taken:
            out.append(v)
            taken.add(v)
    need = batch - len(out)
    if need and space <= _ENUMERATE_LIMIT:
        rest = [v for v in itertools.product((-1, 0, 1), repeat=n) if any(v) and v not in taken]
        order = state.rng.permutation(len(rest))[:need]
        out.extend(rest[i] for i in order)
    elif need:
        while len(out) < batch:
            v = tuple(int(x) for x in state.rng.integers(-1, 2, size=n))
            if any(v) and v not in taken:
                out.append(v)
                taken.add(v)
    state.issued_vectors.update(out)
    return [ObjectiveVector(np.array(v, dtype=float), "minmax") for v in out]


# -- Modeling All Alternatives -----------------------------------------------

def maa_init(p: MgaProblem, rng: np.random.Generator, *, backend=None, basis=None,
             max_init_iters: int = 50, dim_cap: int = MAA_DIM_CAP,
             dedup_tol: float = 1e-6, tie_break: bool = True) -> SolutionArchive:
    """Random-direction solves from the base optimum until the projections
    are affinely full-dimensional."""
    if p.dim > dim_cap:
        raise DimensionCapError(f"MAA limited to {dim_cap} MGA dimensions, got {p.dim}")
    if p.base_point is None:
        raise ValueError("problem carries no base point")
    archive = SolutionArchive(dedup_tol)
    base = p.base_point
    archive.set_base(SolutionRecord(base, p.project(base), p.cost(base), tag="base"))
    state = MethodState("random", p.dim, rng)
    for it in range(1, max_init_iters + 1):
        # the rank test is part of deciding what to solve next, so it is
        # charged to formulation time
        t0 = time.perf_counter_ns()
        if affine_rank(archive.all_points()) >= p.dim:
            return archive
        w = random_propose(state, p.dim)
        w.method, w.iteration = "maa", it
        t1 = time.perf_counter_ns()
        sol = solve_with_objective(p, w, backend, basis=basis, tie_break=tie_break)
        t2 = time.perf_counter_ns()
        if not sol.optimal:
            raise MaaInitError(f"initialization solve {it} returned {sol.status}")
        rec = SolutionRecord(sol.values, p.project(sol.values), p.cost(sol.values), w, it,
                             max(1, t1 - t0), max(1, sol.solve_wall_time), 0, tag="maa-init")
        archive.add(rec)
        rec.wall_ns = max(time.perf_counter_ns() - t0, rec.formulate_ns + rec.solve_ns)
    if affine_rank(archive.all_points()) >= p.dim:
        return archive
    raise MaaInitError(
        f"after {max_init_iters} random solves the solutions span affine rank "
        f"{affine_rank(archive.all_points())} < {p.dim}; the near-optimal region may be "
        "lower-dimensional")


def maa_propose(state: MethodState, archive, hull: HullND,
                angle_tol_deg: float = MAA_ANGLE_TOL_DEG) -> list[ObjectiveVector]:
    """Outward facet normals not within ``angle_tol_deg`` of one already used."""
    cos_tol = float(np.cos(np.deg2rad(angle_tol_deg)))
    normals = np.asarray(hull.normals)
    order = np.lexsort(normals.T[::-1])
    used = list(state.used_normals)
    out: list[ObjectiveVector] = []
    for f in order:
        u = normals[f]
        if used and float(np.max(np.asarray(used) @ u)) >= cos_tol:
            continue
        used.append(u)
        out.append(ObjectiveVector(-u, "maa", parent_facet=int(f)))
    state.used_normals = used
    return out


# -- Hybrid ------------------------------------------------------------------

def axis_brackets(n: int) -> list[ObjectiveVector]:
    return [ObjectiveVector(np.array(v, dtype=float), "hybrid") for v in _axis_vectors(n)]


def hybrid_schedule(n: int, total: int, brackets=None, rng=None, *, extra=()) -> list[ObjectiveVector]:
    """Bracketing objectives first, then random directions up to ``total``.

    ``brackets=None`` uses ``+-e_k`` for every variable; ``extra`` appends
    user interest directions to the default set.
    """
    rng = np.random.default_rng() if rng is None else rng
    default = brackets is None
    pre = axis_brackets(n) if default else [
        b if isinstance(b, ObjectiveVector) else ObjectiveVector(b, "hybrid") for b in brackets]
    pre += [b if isinstance(b, ObjectiveVector) else ObjectiveVector(b, "hybrid") for b in extra]
    seen: set = set()
    head: list[ObjectiveVector] = []
    for b in pre:
        if b.key() not in seen:
            seen.add(b.key())
            b.method = "hybrid"
            head.append(b)
    if total < len(head):
        if not default:
            raise ValueError(f"total {total} is smaller than the {len(head)} bracketing runs")
        warnings.warn(f"total={total} < 2n={2 * n}: not every variable is bracketed both ways",
                      CoverageWarning, stacklevel=2)
        return head[:total]
    state = MethodState("hybrid", n, rng)
    out = head
    while len(out) < total:
        v = random_propose(state, n)
        if v.key() in seen:
            continue
        seen.add(v.key())
        v.method = "hybrid"
        out.append(v)
    return out
