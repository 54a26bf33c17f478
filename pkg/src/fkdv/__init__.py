"""Finite-difference solvers for the fractional Korteweg-de Vries equation

    u_t + (u^2/2)_x - (-Delta)^{alpha/2} u_x = 0,   1 <= alpha < 2.
"""

from .experiments import (
    ConvergenceReport,
    StudyConfig,
    convergence_rate,
    relative_l2_error,
    run_convergence,
)
from .fraclap import (
    FracLapOp,
    Periodization,
    apply,
    apply_dispersive,
    build_operator,
    consistency_study,
    continuous_oracle,
    normalizing_constant,
)
from .grid import Grid, GridFn, apply_stencil, build_grid, inner, norm_h2, norm_l2
from .invariants import InvariantTriple, compute_invariants, normalized_invariants
from .linsolve import Backend, DispersiveSystem, build_system, solve
from .reference import (
    ExperimentPreset,
    bo_soliton,
    fine_grid_reference,
    kdv_two_soliton,
    make_initial,
    make_preset,
)
from .steppers import (
    DtPolicy,
    Scheme,
    SchemeConfig,
    evolve,
    select_dt,
    step_crank_nicolson,
    step_euler_implicit,
    step_operator_split,
)

__all__ = [name for name in dir() if not name.startswith("_")]
