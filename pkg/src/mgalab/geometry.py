"""Convex hulls, the shadow-sum volume estimate and the convergence test."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.spatial import ConvexHull, QhullError

#: Largest MGA dimension the N-D hull accepts without explicit opt-in.
MAA_DIM_CAP = 10

COLLINEAR_EPS = 1e-12


class HullDegenerateError(ValueError):
    """Points do not span the requested dimension."""


class DimensionCapError(ValueError):
    """Requested hull dimension exceeds the configured cap."""


@dataclass(frozen=True)
class Hull2D:
    vertices: np.ndarray  # (k, 2), counter-clockwise from the lexicographic minimum
    area: float

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3


def _turn(o, a, b) -> bool:
    """True when ``a`` must stay on the chain o->a->b.

    Near-collinear triples (relative cross product within the epsilon) drop
    ``a`` only when it lies between ``o`` and ``b``; when the chain folds back
    on itself the exact orientation decides.
    """
    ax, ay = a[0] - o[0], a[1] - o[1]
    bx, by = b[0] - o[0], b[1] - o[1]
    cross = ax * by - ay * bx
    tol = COLLINEAR_EPS * math.hypot(ax, ay) * math.hypot(bx, by)
    if cross > tol:
        return True
    if cross < -tol:
        return False
    if ax * bx + ay * by >= ax * ax + ay * ay:
        return False
    return cross > 0


def _chain(pts: list) -> list:
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and not _turn(lower[-2], lower[-1], p):
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and not _turn(upper[-2], upper[-1], p):
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def shoelace(vertices: np.ndarray) -> float:
    if len(vertices) < 3:
        return 0.0
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def hull_2d(points) -> Hull2D:
    """Monotone-chain hull; collinear and duplicate points are dropped."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise ValueError("hull_2d needs at least one point")
    if not np.all(np.isfinite(pts)):
        raise ValueError("non-finite coordinate")
    pts = np.unique(pts, axis=0)  # sorted lexicographically
    if len(pts) == 1:
        return Hull2D(pts, 0.0)
    verts = _chain([tuple(p) for p in pts.tolist()])
    if len(verts) < 3:
        # all collinear: keep the two extremes
        ends = np.array([pts[0], pts[-1]])
        return Hull2D(ends, 0.0)
    v = np.array(verts)
    return Hull2D(v, shoelace(v))


def _inside(poly: np.ndarray, p: np.ndarray) -> bool:
    """Point in (or on) a counter-clockwise convex polygon."""
    if len(poly) < 3:
        return False
    e = np.roll(poly, -1, axis=0) - poly
    w = p - poly
    cross = e[:, 0] * w[:, 1] - e[:, 1] * w[:, 0]
    scale = np.hypot(e[:, 0], e[:, 1]) * np.hypot(w[:, 0], w[:, 1])
    return bool(np.all(cross >= -COLLINEAR_EPS * scale - 1e-15))


@dataclass(frozen=True)
class HullND:
    dim: int
    points: np.ndarray
    vertices: np.ndarray  # indices into points
    normals: np.ndarray  # (F, dim) outward unit normals
    offsets: np.ndarray  # normal . q <= offset for every point q
    simplices: np.ndarray  # (F, dim) vertex ids per facet

    @property
    def facets(self) -> list[tuple[np.ndarray, float, np.ndarray]]:
        return list(zip(self.normals, self.offsets.tolist(), self.simplices))

    def unique_normals(self, cos_tol: float = 1.0 - 1e-9) -> np.ndarray:
        """Facet normals with coplanar simplicial pieces merged."""
        keep: list[np.ndarray] = []
        for u in self.normals:
            if not any(float(u @ v) >= cos_tol for v in keep):
                keep.append(u)
        return np.array(keep)


def affine_rank(points: np.ndarray, tol: float = 1e-9) -> int:
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0
    d = pts[1:] - pts[0]
    s = np.linalg.svd(d, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def hull_nd(points, dim: int | None = None, *, cap: int = MAA_DIM_CAP) -> HullND:
    """Facet description of the convex hull (Qhull, triangulated facets)."""
    pts = np.asarray(points, dtype=float)
    dim = pts.shape[1] if dim is None else dim
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise ValueError(f"points must have shape (k, {dim})")
    if dim > cap:
        raise DimensionCapError(f"hull dimension {dim} exceeds the cap of {cap}")
    if dim < 2:
        raise HullDegenerateError("hull_nd needs dim >= 2")
    uniq = np.unique(pts, axis=0)
    if len(uniq) < dim + 1 or affine_rank(uniq) < dim:
        raise HullDegenerateError(
            f"points span affine rank {affine_rank(uniq)} < {dim}; re-initialize")
    try:
        h = ConvexHull(uniq)
    except QhullError as exc:
        raise HullDegenerateError(str(exc).splitlines()[0]) from exc
    normals = h.equations[:, :-1]
    norms = np.linalg.norm(normals, axis=1, keepdims=True)
    normals = normals / norms
    offsets = -h.equations[:, -1] / norms[:, 0]
    return HullND(dim, uniq, h.vertices, normals, offsets, h.simplices)


def hull_volume(points) -> float:
    """Exact hull volume by fan decomposition of the facets (small dims only)."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    d = pts.shape[1]
    if len(pts) < d + 1 or affine_rank(pts) < d:
        return 0.0
    h = hull_nd(pts, d, cap=max(d, MAA_DIM_CAP))
    apex = h.points[h.vertices].mean(axis=0)
    vol = 0.0
    for simplex in h.simplices:
        m = h.points[simplex] - apex
        vol += abs(np.linalg.det(m))
    return vol / math.factorial(d)


# -- shadow-sum volume estimate ---------------------------------------------

@dataclass(frozen=True)
class VesaEstimate:
    """Sum of 2-D hull areas over all coordinate-pair projections.

    ``hulls`` keeps each pair's hull vertices so points can be added
    incrementally with :func:`vesa_insert`.
    """

    dims: int
    total: float
    pair_areas: dict
    hulls: dict = field(repr=False, default_factory=dict)
    points: int = 0


def _pairs(dims: int):
    return list(combinations(range(dims), 2))


def vesa(points, dims: int) -> VesaEstimate:
    if dims < 2:
        raise ValueError("VESA needs at least two dimensions")
    pts = np.asarray(points, dtype=float).reshape(-1, dims)
    areas, hulls = {}, {}
    for i, j in _pairs(dims):
        if len(pts) == 0:
            hulls[(i, j)] = np.zeros((0, 2))
            areas[(i, j)] = 0.0
            continue
        h = hull_2d(pts[:, [i, j]])
        hulls[(i, j)] = h.vertices
        areas[(i, j)] = h.area
    return VesaEstimate(dims, math.fsum(areas.values()), areas, hulls, len(pts))


def vesa_insert(est: VesaEstimate, point) -> VesaEstimate:
    """Estimate over the enlarged point set; pairs whose shadow already covers
    the point are reused unchanged."""
    p = np.asarray(point, dtype=float).reshape(-1)
    if p.shape[0] != est.dims:
        raise ValueError(f"point has {p.shape[0]} coordinates, estimate has {est.dims}")
    areas = dict(est.pair_areas)
    hulls = dict(est.hulls)
    for (i, j), verts in est.hulls.items():
        q = p[[i, j]]
        if _inside(verts, q):
            continue
        h = hull_2d(np.vstack([verts, q]) if len(verts) else q[None, :])
        hulls[(i, j)] = h.vertices
        areas[(i, j)] = h.area
    return VesaEstimate(est.dims, math.fsum(areas.values()), areas, hulls, est.points + 1)


# -- convergence ------------------------------------------------------------

@dataclass(frozen=True)
class Convergence:
    converged: bool
    zero_volume: bool = False

    def __bool__(self) -> bool:
        return self.converged


def converged(trajectory, window: int = 10, rel_threshold: float = 0.01,
              floor_eps: float = 1e-12) -> Convergence:
    """Growth over the last ``window`` entries is at most ``rel_threshold``
    of the current value."""
    if window < 1:
        raise ValueError("window must be >= 1")
    traj = list(trajectory)
    if len(traj) < window + 1:
        return Convergence(False)
    last, ref = traj[-1], traj[-1 - window]
    ok = (last - ref) <= rel_threshold * max(last, floor_eps)
    return Convergence(bool(ok), bool(ok and abs(last) <= floor_eps))
