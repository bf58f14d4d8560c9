"""Modeling-to-generate-alternatives (MGA) vector-selection methods, a
shadow-sum volume estimator, reference testbeds and a benchmark harness."""
from .archive import SolutionArchive, SolutionRecord
from .geometry import converged, hull_2d, hull_nd, vesa, vesa_insert
from .harness import ExperimentConfig, RunReport, merge_reports, new_solution_efficiency, run, sweep
from .lp import BudgetSpec, LinearProgram, MgaProblem, Solution, make_mga_problem, solve, solve_with_objective
from .methods import (ObjectiveVector, MethodState, hsj_propose, hybrid_schedule, maa_init,
                      maa_propose, minmax_propose_batch, random_propose)
from .testbeds import TestbedSpec, enumerate_vertices, random_lp, reference_3d

__version__ = "0.1.0"
