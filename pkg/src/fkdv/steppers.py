"""Time stepping for u_t + (u^2/2)_x - (-Delta)^{alpha/2} u_x = 0.

Three single-step maps are provided:

* Euler implicit: convection explicit on the averaged state, dispersion implicit,
      (I + dt FD) u' = bar(u) - dt bar(u) Du
* Crank-Nicolson: everything centred at (u + u')/2; the nonlinear term
  G(v) = tilde(v) Dv is resolved by fixed-point iteration, each sweep being
  one linear dispersive solve with theta = dt/2
* operator splitting: a Lax-Friedrichs Burgers half-step followed by the
  implicit dispersive solve; algebraically identical to Euler implicit

(FD denotes the fractional Laplacian composed with the central difference.)
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .fraclap import FracLapOp, Periodization, build_operator, dispersive_array
from .grid import GridFn, bar, dcentral, norm_h2, norm_l2, norm_sup, shift, tilde
from .linsolve import Backend, DispersiveSystem, build_system, residual, solve_array


class Scheme(str, Enum):
    EI = "euler_implicit"
    CN = "crank_nicolson"
    SPLIT = "operator_split"


class DtPolicy(str, Enum):
    PRACTICAL = "practical"
    EULER_CFL = "euler_cfl"
    CN_CFL = "cn_cfl"
    EXPLICIT = "explicit_value"


SCHEME_ALIASES = {"ei": Scheme.EI, "cn": Scheme.CN, "split": Scheme.SPLIT}


class FixedPointError(RuntimeError):
    pass


class StepError(RuntimeError):
    """A step failed during evolve; ``partial`` holds the trajectory so far."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class SchemeConfig:
    alpha: float = 1.0
    scheme: Scheme = Scheme.CN
    dt_policy: DtPolicy = DtPolicy.PRACTICAL
    dt: float | None = None
    delta: float = 0.5
    L: float = 0.5
    fp_tol: float = 1e-12
    fp_max_iters: int = 50
    solver_tol: float = 1e-12
    backend: Backend | None = None
    periodization: Periodization = Periodization.IMAGES
    cfl_margin: float = 1e-9

    def __post_init__(self):
        scheme = SCHEME_ALIASES.get(self.scheme, self.scheme)
        object.__setattr__(self, "scheme", Scheme(scheme))
        object.__setattr__(self, "dt_policy", DtPolicy(self.dt_policy))
        object.__setattr__(self, "periodization", Periodization(self.periodization))
        if self.backend is not None:
            object.__setattr__(self, "backend", Backend(self.backend))
        if not 1.0 <= self.alpha < 2.0:
            raise ValueError(f"alpha must lie in [1, 2), got {self.alpha}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not 0 < self.L < 1:
            raise ValueError(f"L must lie in (0, 1), got {self.L}")
        if self.fp_tol <= 0 or self.solver_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.fp_max_iters < 1:
            raise ValueError("fp_max_iters must be at least 1")
        if self.dt_policy is DtPolicy.EXPLICIT and not (self.dt and self.dt > 0):
            raise ValueError("explicit_value policy needs a positive dt")

    @property
    def K(self) -> float:
        return (6 - self.L) / (1 - self.L)

    def replace(self, **changes) -> "SchemeConfig":
        return dataclasses.replace(self, **changes)


@dataclass
class StepReport:
    dt_used: float
    fp_iterations: int
    l2_before: float
    l2_after: float
    solver_residual: float
    time_derivative: float = 0.0
    fp_increments: list = field(default_factory=list)


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    reports: list = field(default_factory=list)

    @property
    def final(self) -> GridFn:
        return self.snapshots[-1]


def cn_constant(L: float) -> float:
    """K = (6 - L)/(1 - L) from the Crank-Nicolson solvability bound."""
    return (6 - L) / (1 - L)


def euler_cfl_lambda(l2_norm: float, delta: float, margin: float = 0.0) -> float:
    """Largest lambda = dt/dx^{3/2} with lam*n*(1/3 + lam*n/2) <= (1 - delta)/2 - margin."""
    r = 0.5 * (1 - delta) - margin
    y = -1.0 / 3.0 + math.sqrt(1.0 / 9.0 + 2.0 * r)
    return y / l2_norm


def select_dt(u0: GridFn, cfg: SchemeConfig) -> float:
    dx = u0.grid.dx
    if cfg.dt_policy is DtPolicy.EXPLICIT:
        return float(cfg.dt)
    if cfg.dt_policy is DtPolicy.PRACTICAL:
        amp = norm_sup(u0)
        if amp == 0:
            raise ValueError("practical time step undefined for zero initial data")
        return 0.5 * dx / amp
    if cfg.dt_policy is DtPolicy.EULER_CFL:
        n = norm_l2(u0)
        if n == 0:
            raise ValueError("CFL time step undefined for zero initial data")
        return euler_cfl_lambda(n, cfg.delta, cfg.cfl_margin) * dx**1.5
    h2 = norm_h2(u0)
    if h2 == 0:
        raise ValueError("CFL time step undefined for zero initial data")
    return dx * cfg.L / (cfg.K * h2)


def _check_theta(system: DispersiveSystem, theta: float):
    if not math.isclose(system.theta, theta, rel_tol=1e-12, abs_tol=0.0):
        raise ValueError(f"system built for theta={system.theta}, step needs {theta}")


def convective(v: np.ndarray, dx: float, periodic: bool) -> np.ndarray:
    """G(v) = tilde(v) * Dv, orthogonal to v in periodic mode."""
    return tilde(v, periodic) * dcentral(v, dx, periodic)


def _report(u, new, dt, iters, res, incs=()):
    before, after = norm_l2(u), norm_l2(new)
    return StepReport(
        dt_used=dt,
        fp_iterations=iters,
        l2_before=before,
        l2_after=after,
        solver_residual=res,
        time_derivative=norm_l2(new - u) / abs(dt),
        fp_increments=list(incs),
    )


def step_euler_implicit(u: GridFn, dt: float, op: FracLapOp, system: DispersiveSystem):
    _check_theta(system, dt)
    g = u.grid
    v = u.values
    ub = bar(v, g.periodic)
    rhs = ub - dt * ub * dcentral(v, g.dx, g.periodic)
    w = solve_array(system, rhs)
    new = GridFn(g, w)
    return new, _report(u, new, dt, 0, residual(system, w, rhs))


def burgers_half_step(v: np.ndarray, dt: float, dx: float, periodic: bool) -> np.ndarray:
    """Lax-Friedrichs step for the Burgers part."""
    sq = v * v
    return bar(v, periodic) - dt / (4 * dx) * (shift(sq, 1, periodic) - shift(sq, -1, periodic))


def step_operator_split(u: GridFn, dt: float, op: FracLapOp, system: DispersiveSystem):
    _check_theta(system, dt)
    g = u.grid
    half = burgers_half_step(u.values, dt, g.dx, g.periodic)
    w = solve_array(system, half)
    new = GridFn(g, w)
    return new, _report(u, new, dt, 0, residual(system, w, half))


def step_crank_nicolson(
    u: GridFn, dt: float, op: FracLapOp, system: DispersiveSystem, cfg: SchemeConfig
):
    _check_theta(system, dt / 2)
    g = u.grid
    v = u.values
    base = v - 0.5 * dt * dispersive_array(op, v)
    sqdx = math.sqrt(g.dx)
    w = v
    incs = []
    for it in range(1, cfg.fp_max_iters + 1):
        rhs = base - dt * convective(0.5 * (v + w), g.dx, g.periodic)
        w_next = solve_array(system, rhs)
        inc = sqdx * float(np.linalg.norm(w_next - w))
        incs.append(inc)
        w = w_next
        if inc <= cfg.fp_tol:
            break
    else:
        raise FixedPointError(
            f"fixed-point iteration did not reach {cfg.fp_tol:g} in {cfg.fp_max_iters} "
            f"sweeps (last increment {incs[-1]:.3e}); reduce dt, e.g. dt_policy=cn_cfl"
        )
    new = GridFn(g, w)
    return new, _report(u, new, dt, it, residual(system, w, rhs), incs)


class Stepper:
    """Bundles the operator and cached linear systems for one run."""

    def __init__(self, grid, cfg: SchemeConfig):
        self.cfg = cfg
        self.op = build_operator(grid, cfg.alpha, cfg.periodization)
        self._systems: dict[float, DispersiveSystem] = {}

    def system(self, theta: float) -> DispersiveSystem:
        if theta not in self._systems:
            self._systems[theta] = build_system(
                self.op, theta, self.cfg.backend, self.cfg.solver_tol
            )
        return self._systems[theta]

    def step(self, u: GridFn, dt: float):
        s = self.cfg.scheme
        if s is Scheme.CN:
            return step_crank_nicolson(u, dt, self.op, self.system(dt / 2), self.cfg)
        if s is Scheme.EI:
            return step_euler_implicit(u, dt, self.op, self.system(dt))
        return step_operator_split(u, dt, self.op, self.system(dt))


def evolve(u0: GridFn, T: float, cfg: SchemeConfig, snapshot_stride: int = 0, dt=None):
    """Advance u0 to time T; the final step is shortened to land exactly on T.

    Snapshots are stored at t = 0, every ``snapshot_stride`` steps (0 keeps
    only the endpoints) and at T.
    """
    if not T > 0:
        raise ValueError(f"final time must be positive, got {T}")
    traj = Trajectory([0.0], [u0], [])
    if dt is None:
        if cfg.dt_policy is DtPolicy.EXPLICIT and not np.any(u0.values):
            traj.times.append(float(T))
            traj.snapshots.append(u0)
            return traj
        dt = select_dt(u0, cfg)
    n_steps = max(1, math.ceil(T / dt - 1e-9))
    stepper = Stepper(u0.grid, cfg)
    u = u0
    for n in range(1, n_steps + 1):
        h = dt if n < n_steps else T - (n_steps - 1) * dt
        try:
            u, rep = stepper.step(u, h)
        except Exception as exc:
            raise StepError(f"step {n} at t={(n - 1) * dt:.6g} failed: {exc}", traj) from exc
        traj.reports.append(rep)
        if n == n_steps:
            traj.times.append(float(T))
            traj.snapshots.append(u)
        elif snapshot_stride and n % snapshot_stride == 0:
            traj.times.append(n * dt)
            traj.snapshots.append(u)
    return traj
