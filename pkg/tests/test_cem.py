import csv

import numpy as np
import pytest

from mgalab.cem import CemConfigError, redispatch_audit, select_mga_vars, toy_cem
from mgalab.lp import BudgetSpec, make_mga_problem, solve, solve_with_objective
from mgalab.lpformat import dumps
from mgalab.testbeds import TestbedSpec


@pytest.fixture(scope="module")
def model():
    return toy_cem(TestbedSpec("toy_cem", seed=0))


@pytest.fixture(scope="module")
def base(model):
    return solve(model.lp)


def test_default_structure(model):
    Z, T, H = 3, 4, 72
    assert model.hours == H and len(model.zones) == Z and len(model.techs) == T
    assert [t.name for t in model.techs] == ["gas", "solar", "onshore_wind", "offshore_wind"]
    assert model.balance_rows.shape == (Z, H)
    assert all(model.lp.relations[r] == "=" for r in model.balance_rows.ravel())
    assert np.all(model.availability >= 0) and np.all(model.availability <= 1)
    assert np.all(model.demand >= 0) and np.all(model.fixed_cost >= 0)


def test_mga_variable_sets(model):
    cap = select_mga_vars(model, "capacity")
    gen = select_mga_vars(model, "generation")
    assert len(cap) == 3 * 4 + 2
    assert len(gen) == 3 * 4
    hourly = set(model.gen_idx.ravel()) | set(model.flow_idx.ravel())
    assert not hourly & set(cap) and not hourly & set(gen)
    with pytest.raises(ValueError):
        select_mga_vars(model, "dispatch")


def test_base_solve_serves_demand(model, base):
    assert base.optimal
    assert np.abs(model.balance_residual(base.values)).max() <= 1e-6
    annual = base.values[model.annual_idx]
    np.testing.assert_allclose(annual, base.values[model.gen_idx].sum(axis=2), atol=1e-6)


def test_zero_demand_is_free():
    m = toy_cem(demand_scale=0.0)
    sol = solve(m.lp)
    assert sol.objective_value == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.abs(sol.values[m.fixed_vars()]) <= 1e-12)


@pytest.mark.parametrize("kw", [
    {"zones": 1}, {"hours": 12}, {"hours": 400}, {"demand_scale": -1.0},
    {"max_capacity": 0.1},
])
def test_invalid_parameters_rejected(kw):
    with pytest.raises(CemConfigError):
        toy_cem(**kw)


def test_unknown_spec_option_rejected():
    with pytest.raises(CemConfigError):
        toy_cem(TestbedSpec("toy_cem", cem={"zone": 3}))


def test_deterministic_from_seed():
    a = toy_cem(TestbedSpec("toy_cem", seed=5, cem={"hours": 24}))
    b = toy_cem(TestbedSpec("toy_cem", seed=5, cem={"hours": 24}))
    assert dumps(a.lp) == dumps(b.lp)


def test_capacity_mga_within_budget(model, base):
    p = make_mga_problem(model.lp, base, BudgetSpec("relative", 0.1), select_mga_vars(model))
    rng = np.random.default_rng(0)
    mixes = []
    for _ in range(3):
        sol = solve_with_objective(p, rng.standard_normal(p.dim), basis=base.basis.extend(1))
        assert sol.optimal
        assert p.cost(sol.values) <= 1.1 * base.objective_value + 1e-6
        mixes.append(p.project(sol.values))
    assert len({tuple(np.round(m, 6)) for m in mixes}) > 1


def test_audit_of_base_solution_is_zero(model, base):
    a = redispatch_audit(model, base)
    assert abs(a.variable_cost_error) <= 1e-6
    assert abs(a.emissions_error) <= 1e-6


def test_redispatch_never_costs_more(model, base):
    p = make_mga_problem(model.lp, base, BudgetSpec("relative", 0.1), select_mga_vars(model, "generation"))
    sol = solve_with_objective(p, np.random.default_rng(1).standard_normal(p.dim),
                               basis=base.basis.extend(1))
    a = redispatch_audit(model, sol, p)
    assert a.variable_cost_redispatch <= a.variable_cost_mga + 1e-9


def test_tech_csv(tmp_path, model):
    model.write_tech_csv(tmp_path / "techs.csv")
    rows = list(csv.DictReader((tmp_path / "techs.csv").open()))
    assert len(rows) == 12
    assert set(rows[0]) == {"zone", "tech", "fixed_cost", "variable_cost", "emissions_rate"}
