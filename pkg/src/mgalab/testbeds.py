"""Reference problems and the brute-force vertex oracle."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .lp import LinearProgram

TESTBED_KINDS = ("reference3d", "random_lp", "toy_cem")


@dataclass(frozen=True)
class TestbedSpec:
    """Which reference problem to build.

    ``seed=None`` means the run seed decides the instance.  ``cem`` carries
    toy capacity-model overrides (zones, hours, techs, demand_scale, ...).
    """

    __test__ = False  # not a pytest class

    kind: str = "reference3d"
    dimension: int = 3
    seed: int | None = None
    c_range: tuple[float, float] = (0.1, 1.0)
    b_fraction: tuple[float, float] = (0.05, 0.5)
    mga_mode: str = "capacity"
    cem: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in TESTBED_KINDS:
            raise ValueError(f"unknown testbed kind {self.kind!r}")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.mga_mode not in ("capacity", "generation"):
            raise ValueError(f"mga_mode must be capacity|generation, got {self.mga_mode!r}")


def reference_3d() -> LinearProgram:
    """``min x1 + 2 x2 + 2 x3`` over a small polytope in the 0..10 box."""
    return LinearProgram.from_dense(
        [1.0, 2.0, 2.0],
        [[1, 1, 1], [1, 0, 0], [0, 2, 3]],
        [">=", "<=", "<="],
        [2.0, 3.0, 5.0],
        lower=0.0, upper=10.0,
        names=("x1", "x2", "x3"),
    )


def random_lp(n: int, seed: int, *, c_range=(0.1, 1.0), b_fraction=(0.05, 0.5)) -> LinearProgram:
    """Random covering LP with ``n`` variables in ``[0, 10]`` and ``2n`` ``>=`` rows.

    ``b_i`` is a random fraction of ``sum_j 10 A_ij`` so the all-10 point is
    always feasible and no row is vacuous.
    """
    if n < 2:
        raise ValueError("random_lp needs n >= 2")
    rng = np.random.default_rng(seed)
    lo_c, hi_c = c_range
    # Uniform(lo, hi]: flip the half-open interval of Generator.uniform
    c = hi_c - rng.uniform(0.0, hi_c - lo_c, size=n)
    A = rng.uniform(0.0, 1.0, size=(2 * n, n))
    u = rng.uniform(*b_fraction, size=2 * n)
    b = u * (10.0 * A.sum(axis=1))
    return LinearProgram.from_dense(c, A, [">="] * (2 * n), b, 0.0, 10.0)


class OracleSizeError(ValueError):
    """Vertex enumeration would be combinatorially too large."""


def enumerate_vertices(lp: LinearProgram, *, max_vars: int = 8, max_rows: int = 25,
                       tol: float = 1e-7) -> np.ndarray:
    """All basic feasible solutions of ``lp`` by exhaustive active-set search.

    Rows and finite bounds are candidate active sets; each choice of
    ``num_vars`` of them with a nonsingular system is solved and kept if
    feasible.  Output is deduplicated (L-inf ``tol``) and sorted
    lexicographically.
    """
    n = lp.num_vars
    A = lp.A.toarray()
    rows = [A[i] for i in range(lp.num_rows)]
    rhs = list(lp.rhs)
    eye = np.eye(n)
    for j in range(n):
        if np.isfinite(lp.lower[j]):
            rows.append(eye[j])
            rhs.append(lp.lower[j])
        if np.isfinite(lp.upper[j]) and lp.upper[j] != lp.lower[j]:
            rows.append(eye[j])
            rhs.append(lp.upper[j])
    if n > max_vars or len(rows) > max_rows:
        raise OracleSizeError(
            f"oracle limited to {max_vars} vars and {max_rows} rows, got {n} and {len(rows)}")
    M = np.array(rows)
    r = np.array(rhs)
    found: list[np.ndarray] = []
    for comb in itertools.combinations(range(len(rows)), n):
        sub = M[list(comb)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        x = np.linalg.solve(sub, r[list(comb)])
        if not lp.is_feasible(x, tol=1e-9 * max(1.0, np.abs(r).max())):
            continue
        if any(np.max(np.abs(x - v)) <= tol for v in found):
            continue
        found.append(x)
    if not found:
        return np.zeros((0, n))
    out = np.array(found)
    out[np.abs(out) < 1e-12] = 0.0
    order = np.lexsort(out.T[::-1])
    return out[order]
