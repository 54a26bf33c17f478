"""Closed-form reference solutions and initial data for the standard experiments."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .grid import Grid, GridFn


class InitialDataWarning(UserWarning):
    pass


class PresetName(str, Enum):
    BO = "bo_soliton"
    SINE = "sine_fractional"
    KDV2 = "kdv_two_soliton"


ALIASES = {"bo": PresetName.BO, "sine": PresetName.SINE, "kdv2": PresetName.KDV2}


def bo_delta(c: float, L: float) -> float:
    return np.pi / (c * L)


def bo_soliton(x, t, c: float = 0.25, L: float = 15.0):
    """Periodic travelling wave of the Benjamin-Ono equation (alpha = 1).

    u(x, t) = 2 c delta^2 / (1 - sqrt(1 - delta^2) cos(c delta (x - c t))),
    delta = pi / (c L).  Spatial period 2L, temporal period 2L / c.
    """
    d = bo_delta(c, L)
    if not (0 < d < 1):
        raise ValueError(f"delta = pi/(cL) must lie in (0, 1), got {d}")
    x = np.asarray(x, dtype=float)
    return 2 * c * d**2 / (1 - np.sqrt(1 - d * d) * np.cos(c * d * (x - c * t)))


def kdv_two_soliton(x, t, c: float = 0.5, d: float = 1.0):
    """Two-soliton solution of u_t + (u^2/2)_x + u_xxx = 0.

    The d-soliton travels at speed 2d, the c-soliton at speed 2c. Hyperbolic
    functions are written through exp(-2|z|) so large arguments cannot overflow.
    The csch/coth factors are singular at x = 2 d t, where evaluation is refused.
    """
    if c == d:
        raise ValueError("two-soliton needs c != d")
    x = np.asarray(x, dtype=float)
    a = np.sqrt(d / 2) * (x - 2 * d * t)
    b = np.sqrt(c / 2) * (x - 2 * c * t)
    if np.any(a == 0):
        raise ValueError("two-soliton formula is singular at x = 2 d t")
    ea = np.exp(-2 * np.abs(a))
    eb = np.exp(-2 * np.abs(b))
    csch2 = 4 * ea / (1 - ea) ** 2
    sech2 = 4 * eb / (1 + eb) ** 2
    coth = np.sign(a) * (1 + ea) / (1 - ea)
    tanh = np.sign(b) * (1 - eb) / (1 + eb)
    num = d * csch2 + c * sech2
    den = (np.sqrt(c) * tanh - np.sqrt(d) * coth) ** 2
    return 6 * (d - c) * num / den


@dataclass(frozen=True)
class ExperimentPreset:
    name: PresetName
    alpha: float
    domain: tuple[float, float]
    params: dict = field(default_factory=dict)
    t_init_offset: float = 0.0
    t_final: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "name", PresetName(self.name))
        if self.name is PresetName.BO:
            if not 0 < bo_delta(self.params["c"], self.params["L"]) < 1:
                raise ValueError("BO preset needs pi/(cL) < 1")
        if self.name is PresetName.KDV2 and self.params["c"] == self.params["d"]:
            raise ValueError("two-soliton preset needs c != d")

    @property
    def has_exact(self) -> bool:
        return self.name is not PresetName.SINE

    def initial_function(self, x):
        return self.exact(x, 0.0) if self.has_exact else self.params["amplitude"] * np.sin(x)

    def exact(self, x, t):
        """Closed-form solution at simulation time t (None-free presets only)."""
        p = self.params
        if self.name is PresetName.BO:
            return bo_soliton(x, t + self.t_init_offset, p["c"], p["L"])
        if self.name is PresetName.KDV2:
            return kdv_two_soliton(x, t + self.t_init_offset, p["c"], p["d"])
        raise ValueError("sine preset has no closed-form solution")


def bo_preset(t_final: float = 120.0, c: float = 0.25, L: float = 15.0) -> ExperimentPreset:
    return ExperimentPreset(PresetName.BO, 1.0, (-L, L), {"c": c, "L": L}, 0.0, t_final)


def sine_preset(alpha: float = 1.5, t_final: float = 5.0, amplitude: float = 0.5):
    return ExperimentPreset(
        PresetName.SINE, alpha, (-4 * np.pi, 4 * np.pi), {"amplitude": amplitude}, 0.0, t_final
    )


def kdv2_preset(
    scheme: str = "crank_nicolson", alpha: float = 1.999, c: float = 0.5, d: float = 1.0,
    domain: tuple[float, float] = (-90.0, 90.0),
) -> ExperimentPreset:
    """Two-soliton run: CN starts at t=-20 for 40 time units, EI at t=-10 for 20."""
    offset, T = (-20.0, 40.0) if scheme == "crank_nicolson" else (-10.0, 20.0)
    return ExperimentPreset(PresetName.KDV2, alpha, domain, {"c": c, "d": d}, offset, T)


def make_preset(name: str, scheme: str = "crank_nicolson", **overrides) -> ExperimentPreset:
    key = ALIASES.get(name, None) or PresetName(name)
    if key is PresetName.BO:
        base = bo_preset()
    elif key is PresetName.SINE:
        base = sine_preset()
    else:
        base = kdv2_preset(scheme)
    fields = {k: v for k, v in overrides.items() if v is not None}
    params = dict(base.params, **fields.pop("params", {}))
    return ExperimentPreset(
        base.name,
        fields.get("alpha", base.alpha),
        tuple(fields.get("domain", base.domain)),
        params,
        fields.get("t_init_offset", base.t_init_offset),
        fields.get("t_final", base.t_final),
    )


BOUNDARY_THRESHOLD = 1e-6


def make_initial(preset: ExperimentPreset, grid: Grid) -> GridFn:
    """Sample the preset's initial data at the grid nodes.

    On truncated grids a warning is issued when the data has not decayed below
    1e-6 at either end; on periodic grids when the data does not close up to
    within 1e-6 across the period.
    """
    u = GridFn(grid, preset.initial_function(grid.x))
    ends = preset.initial_function(np.array([grid.a, grid.b]))
    if grid.periodic:
        gap = abs(ends[1] - ends[0])
        if gap > BOUNDARY_THRESHOLD:
            warnings.warn(
                f"initial data is not periodic on [{grid.a}, {grid.b}] (gap {gap:.2e})",
                InitialDataWarning,
                stacklevel=2,
            )
    else:
        edge = np.max(np.abs(ends))
        if edge > BOUNDARY_THRESHOLD:
            warnings.warn(
                f"initial data has not decayed at the boundary (|u| = {edge:.2e})",
                InitialDataWarning,
                stacklevel=2,
            )
    return u


def restrict(u_fine: GridFn, coarse: Grid) -> GridFn:
    """Restrict by node coincidence; N_fine must be a multiple of N_coarse."""
    fine = u_fine.grid
    if (fine.a, fine.b) != (coarse.a, coarse.b):
        raise ValueError("grids cover different intervals")
    if fine.N % coarse.N:
        raise ValueError(f"N_ref={fine.N} is not divisible by N_coarse={coarse.N}")
    return GridFn(coarse, u_fine.values[:: fine.N // coarse.N])


def fine_grid_reference(preset: ExperimentPreset, cfg, N_ref: int, N_coarse: int, mode="periodic"):
    """Evolve the preset with Crank-Nicolson on N_ref nodes and restrict to N_coarse."""
    from .grid import build_grid
    from .steppers import Scheme, evolve

    if N_ref % N_coarse:
        raise ValueError(f"N_ref={N_ref} is not divisible by N_coarse={N_coarse}")
    a, b = preset.domain
    fine = build_grid(a, b, N_ref, mode)
    u0 = make_initial(preset, fine)
    traj = evolve(u0, preset.t_final, cfg.replace(scheme=Scheme.CN))
    return restrict(traj.final, build_grid(a, b, N_coarse, mode))
