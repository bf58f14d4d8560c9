"""Toy multi-zone capacity-expansion model and the redispatch audit.

Units: capacity in GW, energy in GWh per model hour, costs in M$ (fixed
costs are annualized and pro-rated to the modeled hours), emissions in
ktCO2 (a rate of 0.4 tCO2/MWh is 0.4 ktCO2/GWh).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .lp import LinearProgram, MgaProblem, Solution


@dataclass(frozen=True)
class Technology:
    name: str
    fixed_cost: float  # M$/GW-yr
    variable_cost: float  # M$/GWh
    emissions_rate: float  # ktCO2/GWh
    profile: str  # flat | solar | wind | offshore


DEFAULT_TECHS = (
    Technology("gas", 95.0, 0.035, 0.40, "flat"),
    Technology("solar", 65.0, 0.0005, 0.0, "solar"),
    Technology("onshore_wind", 110.0, 0.001, 0.0, "wind"),
    Technology("offshore_wind", 200.0, 0.0015, 0.0, "offshore"),
)


class CemConfigError(ValueError):
    """Parameters that cannot yield a feasible capacity model."""


@dataclass(frozen=True, eq=False)
class CapacityModel:
    lp: LinearProgram
    zones: tuple[str, ...]
    techs: tuple[Technology, ...]
    hours: int
    fixed_cost: np.ndarray  # (Z, T) M$/GW over the modeled horizon
    availability: np.ndarray  # (Z, T, H)
    demand: np.ndarray  # (Z, H)
    links: tuple[tuple[int, int], ...]
    link_cost: float
    loss: float
    cap_idx: np.ndarray  # (Z, T)
    tcap_idx: np.ndarray  # (L,)
    gen_idx: np.ndarray  # (Z, T, H)
    flow_idx: np.ndarray  # (L, 2, H); direction 0 is a->b
    annual_idx: np.ndarray  # (Z, T)
    balance_rows: np.ndarray  # (Z, H)
    meta: dict = field(default_factory=dict)

    @property
    def variable_cost_vector(self) -> np.ndarray:
        c = np.zeros(self.lp.num_vars)
        for t, tech in enumerate(self.techs):
            c[self.gen_idx[:, t, :].ravel()] = tech.variable_cost
        return c

    @property
    def emissions_vector(self) -> np.ndarray:
        e = np.zeros(self.lp.num_vars)
        for t, tech in enumerate(self.techs):
            e[self.gen_idx[:, t, :].ravel()] = tech.emissions_rate
        return e

    def variable_cost(self, x: np.ndarray) -> float:
        return float(self.variable_cost_vector @ x)

    def emissions(self, x: np.ndarray) -> float:
        return float(self.emissions_vector @ x)

    def fixed_vars(self) -> np.ndarray:
        """Capacity and transmission-capacity indices."""
        return np.concatenate([self.cap_idx.ravel(), self.tcap_idx])

    def balance_residual(self, x: np.ndarray) -> np.ndarray:
        """Supply + imports - exports - demand, per zone and hour."""
        A = self.lp.A.tocsr()
        rows = self.balance_rows.ravel()
        return (A[rows] @ x - self.lp.rhs[rows]).reshape(self.balance_rows.shape)

    def write_tech_csv(self, path) -> None:
        with Path(path).open("w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["zone", "tech", "fixed_cost", "variable_cost", "emissions_rate"])
            for z, zone in enumerate(self.zones):
                for t, tech in enumerate(self.techs):
                    w.writerow([zone, tech.name, repr(float(self.fixed_cost[z, t])),
                                repr(tech.variable_cost), repr(tech.emissions_rate)])


def _profiles(rng: np.random.Generator, zones: int, techs, hours: int) -> np.ndarray:
    h = np.arange(hours)
    out = np.zeros((zones, len(techs), hours))
    for z in range(zones):
        # southern zones sunnier, northern ones windier
        sun = 0.75 + 0.25 * z / max(zones - 1, 1)
        wind = 1.1 - 0.2 * z / max(zones - 1, 1)
        for t, tech in enumerate(techs):
            if tech.profile == "flat":
                out[z, t] = 1.0
            elif tech.profile == "solar":
                day = np.clip(np.sin(np.pi * ((h % 24) - 6) / 12.0), 0.0, None)
                cloud = np.repeat(rng.uniform(0.55, 1.0, size=hours // 24 + 1), 24)[:hours]
                out[z, t] = np.clip(sun * day * cloud, 0.0, 1.0)
            else:
                mean = 0.35 if tech.profile == "wind" else 0.48
                x = np.empty(hours)
                level = rng.uniform(0.0, 1.0)
                for k in range(hours):
                    level = 0.9 * level + 0.1 * rng.uniform(0.0, 1.0) + 0.08 * rng.standard_normal()
                    x[k] = level
                x = mean * wind * x / max(float(np.mean(np.clip(x, 0, None))), 1e-6)
                out[z, t] = np.clip(x, 0.0, 1.0)
    return out


def toy_cem(spec=None, *, zones: int = 3, hours: int = 72, seed: int = 0,
            demand_scale: float = 1.0, techs=DEFAULT_TECHS, link_cost: float = 40.0,
            loss: float = 0.02, max_capacity: float | None = None) -> CapacityModel:
    """Least-cost build and dispatch over ``hours`` for a chain of zones.

    ``spec`` (a :class:`~mgalab.testbeds.TestbedSpec`) overrides the keyword
    defaults through its ``seed`` and ``cem`` fields.
    """
    if spec is not None:
        opts = dict(spec.cem)
        seed = spec.seed if spec.seed is not None else seed
        zones = int(opts.pop("zones", zones))
        hours = int(opts.pop("hours", hours))
        demand_scale = float(opts.pop("demand_scale", demand_scale))
        link_cost = float(opts.pop("link_cost", link_cost))
        loss = float(opts.pop("loss", loss))
        max_capacity = opts.pop("max_capacity", max_capacity)
        if opts:
            raise CemConfigError(f"unknown cem option(s): {sorted(opts)}")
    techs = tuple(techs)
    if zones < 2:
        raise CemConfigError("need at least 2 zones")
    if not 24 <= hours <= 336:
        raise CemConfigError("hours must be within [24, 336]")
    profiles = {t.profile for t in techs}
    n_var_re = sum(t.profile != "flat" for t in techs)
    if len(techs) < 3 or "flat" not in profiles or n_var_re < 2:
        raise CemConfigError("need >= 3 technologies: one dispatchable and two variable renewables")
    if demand_scale < 0:
        raise CemConfigError("demand_scale must be >= 0")
    if any(t.fixed_cost < 0 or t.variable_cost < 0 for t in techs) or link_cost < 0:
        raise CemConfigError("costs must be non-negative")

    rng = np.random.default_rng(seed)
    Z, T, H = zones, len(techs), hours
    avail = _profiles(rng, Z, techs, H)
    base_load = np.linspace(2.0, 1.2, Z) * rng.uniform(0.9, 1.1, size=Z)
    hr = np.arange(H)
    shape = 0.85 + 0.15 * np.sin(2 * np.pi * ((hr % 24) - 9) / 24.0)
    demand = demand_scale * base_load[:, None] * shape[None, :] * rng.uniform(0.97, 1.03, size=(Z, H))
    horizon = H / 8760.0
    fixed = np.array([[t.fixed_cost for t in techs]] * Z) * rng.uniform(0.9, 1.1, size=(Z, T)) * horizon
    links = tuple((z, z + 1) for z in range(Z - 1))
    L = len(links)
    peak = float(demand.sum(axis=0).max()) if demand.size else 0.0
    cap_max = float(max_capacity) if max_capacity is not None else 5.0 * max(peak, 1.0)

    # feasibility: each zone must cover its own peak with local firm supply
    # plus the most it could import
    for z in range(Z):
        local = (avail[z] * cap_max).sum(axis=0)
        imports = cap_max * sum(1 for a, b in links if z in (a, b))
        if np.any(demand[z] > local + (1 - loss) * imports + 1e-9):
            raise CemConfigError(f"demand in zone {z} exceeds buildable capacity")

    # variable layout
    nxt = 0

    def block(*shape):
        nonlocal nxt
        size = int(np.prod(shape))
        idx = np.arange(nxt, nxt + size).reshape(shape)
        nxt += size
        return idx

    cap_idx = block(Z, T)
    tcap_idx = block(L)
    gen_idx = block(Z, T, H)
    flow_idx = block(L, 2, H)
    annual_idx = block(Z, T)
    n = nxt

    rows, cols, vals, rel, rhs = [], [], [], [], []
    r = 0
    balance_rows = np.zeros((Z, H), dtype=int)
    for z in range(Z):
        for h in range(H):
            for t in range(T):
                rows.append(r); cols.append(gen_idx[z, t, h]); vals.append(1.0)
            for l, (a, b) in enumerate(links):
                if z == a:
                    rows += [r, r]; cols += [flow_idx[l, 1, h], flow_idx[l, 0, h]]
                    vals += [1.0 - loss, -1.0]
                elif z == b:
                    rows += [r, r]; cols += [flow_idx[l, 0, h], flow_idx[l, 1, h]]
                    vals += [1.0 - loss, -1.0]
            rel.append("="); rhs.append(float(demand[z, h]))
            balance_rows[z, h] = r
            r += 1
    for z in range(Z):
        for t in range(T):
            for h in range(H):
                rows += [r, r]; cols += [gen_idx[z, t, h], cap_idx[z, t]]
                vals += [1.0, -float(avail[z, t, h])]
                rel.append("<="); rhs.append(0.0)
                r += 1
    for l in range(L):
        for d in range(2):
            for h in range(H):
                rows += [r, r]; cols += [flow_idx[l, d, h], tcap_idx[l]]; vals += [1.0, -1.0]
                rel.append("<="); rhs.append(0.0)
                r += 1
    for z in range(Z):
        for t in range(T):
            rows.append(r); cols.append(annual_idx[z, t]); vals.append(1.0)
            rows += [r] * H; cols += list(gen_idx[z, t, :]); vals += [-1.0] * H
            rel.append("="); rhs.append(0.0)
            r += 1
    A = sp.csr_matrix((vals, (rows, cols)), shape=(r, n))

    c = np.zeros(n)
    c[cap_idx.ravel()] = fixed.ravel()
    c[tcap_idx] = link_cost * horizon
    for t, tech in enumerate(techs):
        c[gen_idx[:, t, :].ravel()] = tech.variable_cost
    upper = np.full(n, np.inf)
    upper[cap_idx.ravel()] = cap_max
    upper[tcap_idx] = cap_max
    upper[annual_idx.ravel()] = cap_max * H
    names = ([f"CAP[{z},{t.name}]" for z in range(Z) for t in techs]
             + [f"TCAP[{a}-{b}]" for a, b in links]
             + [f"GEN[{z},{t.name},{h}]" for z in range(Z) for t in techs for h in range(H)]
             + [f"FLOW[{a}-{b},{d},{h}]" for a, b in links for d in range(2) for h in range(H)]
             + [f"GEN_annual[{z},{t.name}]" for z in range(Z) for t in techs])
    lp = LinearProgram(n, c, A, tuple(rel), np.array(rhs), 0.0, upper, "min", tuple(names))
    zone_names = tuple(f"z{z + 1}" for z in range(Z))
    return CapacityModel(lp, zone_names, techs, H, fixed, avail, demand, links,
                         link_cost * horizon, loss, cap_idx, tcap_idx, gen_idx, flow_idx,
                         annual_idx, balance_rows, {"seed": seed, "cap_max": cap_max})


def select_mga_vars(model: CapacityModel, mode: str = "capacity") -> tuple[int, ...]:
    """Capacity mode: every build variable (generators and links).
    Generation mode: per-zone, per-technology generation totals."""
    if mode == "capacity":
        return tuple(int(i) for i in model.fixed_vars())
    if mode == "generation":
        return tuple(int(i) for i in model.annual_idx.ravel())
    raise ValueError(f"mode must be capacity|generation, got {mode!r}")


@dataclass(frozen=True)
class AuditRecord:
    variable_cost_mga: float
    variable_cost_redispatch: float
    emissions_mga: float
    emissions_redispatch: float

    @staticmethod
    def _pct(a: float, b: float) -> float:
        if b == 0:
            return 0.0 if a == 0 else float("inf")
        return 100.0 * (a - b) / b

    @property
    def variable_cost_error(self) -> float:
        """Percent excess operating cost of the MGA dispatch."""
        return self._pct(self.variable_cost_mga, self.variable_cost_redispatch)

    @property
    def emissions_error(self) -> float:
        return self._pct(self.emissions_mga, self.emissions_redispatch)


def redispatch_audit(model: CapacityModel, mga_solution, problem: MgaProblem | None = None,
                     backend=None) -> AuditRecord:
    """Fix the build of ``mga_solution`` and re-minimize operating cost.

    Passing the ``problem`` the solution came from lets the solver start
    from that solution's basis (the budget row stays, it cannot bind).
    """
    from .simplex import NumericalError, SimplexBackend

    x = np.asarray(getattr(mga_solution, "values", mga_solution), dtype=float)
    basis = getattr(mga_solution, "basis", None)
    fixed = model.fixed_vars()
    base_lp = problem.lp if problem is not None else model.lp
    if problem is None:
        basis = None
    lp = base_lp.with_bounds(fixed, x[fixed], x[fixed]).with_objective(model.variable_cost_vector, "min")
    be = backend if backend is not None else SimplexBackend()
    be.load(lp)
    if basis is not None and hasattr(be, "basis"):
        be.basis = basis
    sol: Solution = be.solve()
    if not sol.optimal:
        raise NumericalError(f"redispatch with fixed capacities is {sol.status}")
    return AuditRecord(model.variable_cost(x), model.variable_cost(sol.values),
                       model.emissions(x), model.emissions(sol.values))
