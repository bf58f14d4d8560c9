import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mgalab.archive import SolutionArchive, SolutionRecord
from mgalab.geometry import DimensionCapError, hull_nd
from mgalab.methods import (CoverageWarning, MaaInitError, MethodState, ObjectiveVector,
                            SignSpaceExhausted, hsj_propose, hybrid_schedule, maa_init,
                            maa_propose, minmax_propose_batch, random_propose)
from mgalab.lp import BudgetSpec, LinearProgram, make_mga_problem, solve
from mgalab.simplex import SimplexBackend

# recorded point sequence of the reference HSJ trace and its weight rows
TRACE = [(2, 0, 0), (0, 2, 0), (1 / 3, 0, 5 / 3), (0, 1, 1), (0, 1, 1),
         (2, 0, 0), (2, 0, 0), (0, 2, 0), (1 / 3, 0, 5 / 3), (0, 1, 1)]
TRACE_WEIGHTS = [(1, 0, 0), (1, 1, 0), (2, 1, 1), (2, 2, 2), (2, 3, 3),
                 (3, 3, 3), (4, 3, 3), (4, 4, 3), (5, 4, 4), (5, 5, 5)]


def _archive(points):
    a = SolutionArchive()
    a.set_base(SolutionRecord(np.array(points[0], float), np.array(points[0], float), 0.0))
    for p in points[1:]:
        p = np.array(p, float)
        a.add(SolutionRecord(p, p, 0.0))
    return a


def test_objective_vector_rejects_zero():
    with pytest.raises(ValueError):
        ObjectiveVector(np.zeros(3), "random")


@pytest.mark.parametrize("k", range(1, 11))
def test_hsj_replays_trace(k):
    w = hsj_propose(MethodState("hsj", 3), _archive(TRACE[:k]))
    assert tuple(int(v) for v in w.weights) == TRACE_WEIGHTS[k - 1]
    assert np.array_equal(w.weights, np.round(w.weights))


def test_hsj_counts_duplicates_and_rejects_empty():
    st_ = MethodState("hsj", 3)
    hsj_propose(st_, _archive(TRACE[:5]))
    assert st_.appearance_counts.tolist() == [2, 3, 3]
    with pytest.raises(ValueError):
        hsj_propose(MethodState("hsj", 3), SolutionArchive())


def test_random_golden_value():
    w = random_propose(MethodState("random", 3, np.random.default_rng(42)), 3)
    np.testing.assert_array_equal(
        w.weights, [0.23116513807972336, -0.7889550192379909, 0.5693089289267855])


def test_random_one_dimensional():
    st_ = MethodState("random", 1, np.random.default_rng(0))
    assert {random_propose(st_, 1).weights[0] for _ in range(50)} == {-1.0, 1.0}
    with pytest.raises(ValueError):
        random_propose(st_, 0)


@settings(max_examples=50)
@given(n=st.integers(1, 40), seed=st.integers(0, 2**32 - 1))
def test_random_unit_norm(n, seed):
    w = random_propose(MethodState("random", n, np.random.default_rng(seed)), n)
    assert abs(np.linalg.norm(w.weights) - 1.0) <= 1e-12


def test_random_isotropy():
    st_ = MethodState("random", 3, np.random.default_rng(1))
    W = np.array([random_propose(st_, 3).weights for _ in range(20_000)])
    assert np.linalg.norm(W.mean(axis=0)) < 0.05
    np.testing.assert_allclose(W.var(axis=0), 1 / 3, rtol=0.2)


def test_minmax_enumerates_small_space():
    vs = minmax_propose_batch(MethodState("minmax", 2), 2, 8)
    got = {v.key() for v in vs}
    want = {v for v in itertools.product((-1.0, 0.0, 1.0), repeat=2) if any(v)}
    assert got == want and len(vs) == 8
    with pytest.raises(SignSpaceExhausted):
        minmax_propose_batch(MethodState("minmax", 2), 2, 9)


def test_minmax_axis_first():
    vs = minmax_propose_batch(MethodState("minmax", 3), 3, 6)
    assert {v.key() for v in vs} == {tuple(s * e) for e in np.eye(3) for s in (1.0, -1.0)}


def test_minmax_tracks_issued_vectors():
    st_ = MethodState("minmax", 2)
    a = minmax_propose_batch(st_, 2, 5)
    b = minmax_propose_batch(st_, 2, 3)
    assert not {v.key() for v in a} & {v.key() for v in b}
    with pytest.raises(SignSpaceExhausted):
        minmax_propose_batch(st_, 2, 1)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 14), batch=st.integers(1, 60), seed=st.integers(0, 1000))
def test_minmax_batch_validity(n, batch, seed):
    st_ = MethodState("minmax", n, np.random.default_rng(seed))
    if batch > 3 ** n - 1:
        with pytest.raises(SignSpaceExhausted):
            minmax_propose_batch(st_, n, batch)
        return
    vs = minmax_propose_batch(st_, n, batch)
    W = np.array([v.weights for v in vs])
    assert len(vs) == batch
    assert set(np.unique(W)) <= {-1.0, 0.0, 1.0}
    assert np.all(np.any(W != 0, axis=1))
    assert len({v.key() for v in vs}) == batch
    if batch >= 2 * n:
        assert np.all((W == 1).any(axis=0)) and np.all((W == -1).any(axis=0))


def test_maa_init_reference(ref3d_problem):
    be = SimplexBackend()
    be.load(ref3d_problem.lp)
    a = maa_init(ref3d_problem, np.random.default_rng(0), backend=be)
    pts = a.all_points()
    assert len(pts) >= 4
    np.testing.assert_allclose(pts[0], [2, 0, 0])
    from mgalab.geometry import affine_rank
    assert affine_rank(pts) == 3
    assert all(r.formulate_ns > 0 and r.solve_ns > 0 for r in a.records)


def test_maa_init_two_dimensional_square():
    lp = LinearProgram.from_dense([0, 0], np.zeros((0, 2)), [], [], 0.0, 1.0)
    base = solve(lp)
    p = make_mga_problem(lp, base, BudgetSpec("absolute", 1.0), (0, 1))
    a = maa_init(p, np.random.default_rng(2))
    from mgalab.geometry import affine_rank
    assert affine_rank(a.all_points()) == 2


def test_maa_init_fails_on_point_region():
    # x1 = x2 = 1 is the only feasible point
    lp = LinearProgram.from_dense([1, 1], [[1, 0], [0, 1]], ["=", "="], [1, 1])
    p = make_mga_problem(lp, solve(lp), BudgetSpec("absolute", 1.0), (0, 1))
    with pytest.raises(MaaInitError, match="lower-dimensional"):
        maa_init(p, np.random.default_rng(0), max_init_iters=5)


def test_maa_dimension_cap():
    lp = LinearProgram.from_dense(np.ones(12), np.ones((1, 12)), [">="], [1], 0.0, 1.0)
    p = make_mga_problem(lp, solve(lp), BudgetSpec("absolute", 1.0), range(12))
    with pytest.raises(DimensionCapError):
        maa_init(p, np.random.default_rng(0))


def test_maa_propose_simplex_and_outwardness():
    pts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], float)
    hull = hull_nd(pts)
    st_ = MethodState("maa", 3)
    vs = maa_propose(st_, pts, hull)
    assert len(vs) == 4
    for v in vs:
        u = -v.weights
        assert abs(np.linalg.norm(u) - 1) < 1e-12
        face = hull.points[hull.simplices[v.parent_facet]]
        assert np.all(pts @ u <= face[0] @ u + 1e-6)
    assert maa_propose(st_, pts, hull) == []  # every normal already used


def test_maa_propose_angle_dedup():
    # two nearly coplanar facets: a flat-topped box with a 0.1 degree tilt
    t = np.tan(np.deg2rad(0.1))
    pts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0],
                    [0, 0, 1], [1, 0, 1 + t], [0, 1, 1], [1, 1, 1 + t], [0.5, 0.5, 1 + 0.5 * t]])
    hull = hull_nd(pts)
    ups = [v for v in maa_propose(MethodState("maa", 3), pts, hull) if -v.weights[2] > 0.99]
    assert len(ups) == 1


def test_hybrid_schedule_counts():
    rng = np.random.default_rng(0)
    s = hybrid_schedule(3, 10, rng=rng)
    assert len(s) == 10
    assert [v.key() for v in s[:6]] == [tuple(x * e) for e in np.eye(3) for x in (1.0, -1.0)]
    assert all(abs(np.linalg.norm(v.weights) - 1) < 1e-12 for v in s[6:])
    s2 = hybrid_schedule(2, 4, brackets=[np.array([1.0, 0]), np.array([-1.0, 0])], rng=rng)
    assert len(s2) == 4 and s2[0].key() == (1.0, 0.0)


def test_hybrid_schedule_warns_on_short_total():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        s = hybrid_schedule(3, 4, rng=np.random.default_rng(0))
    assert len(s) == 4
    assert any(issubclass(x.category, CoverageWarning) for x in w)
    with pytest.raises(ValueError):
        hybrid_schedule(2, 1, brackets=[np.array([1.0, 0]), np.array([0, 1.0])])


def test_hybrid_dedups_extra_directions():
    s = hybrid_schedule(2, 6, rng=np.random.default_rng(0), extra=[np.array([1.0, 0.0]), np.array([1.0, 1.0])])
    keys = [v.key() for v in s]
    assert len(set(keys)) == len(keys) == 6
    assert (1.0, 1.0) in keys
