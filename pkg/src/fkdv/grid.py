"""Uniform 1-D grids, grid functions, difference stencils and discrete norms.

All stencils resolve neighbours through the grid's boundary mode: periodic
grids wrap indices modulo N, truncated grids read out-of-range values as 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Mode(str, Enum):
    PERIODIC = "periodic"
    TRUNCATED = "truncated"


class Stencil(str, Enum):
    DPLUS = "Dplus"
    DMINUS = "Dminus"
    DCENTRAL = "Dcentral"
    SPLUS = "Splus"
    SMINUS = "Sminus"
    BAR = "BarAvg"
    TILDE = "TildeAvg"


MIN_NODES = 4


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    N: int
    mode: Mode = Mode.PERIODIC

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise ValueError(f"grid needs b > a, got a={self.a}, b={self.b}")
        if int(self.N) != self.N or self.N < MIN_NODES:
            raise ValueError(f"grid needs at least {MIN_NODES} nodes, got N={self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.N

    @property
    def x(self) -> np.ndarray:
        return self.a + self.dx * np.arange(self.N)

    @property
    def periodic(self) -> bool:
        return self.mode is Mode.PERIODIC


def build_grid(a: float, b: float, N: int, mode: Mode | str = Mode.PERIODIC) -> Grid:
    """Grid on [a, b) with N nodes x_j = a + j*dx, dx = (b - a)/N."""
    return Grid(float(a), float(b), N, Mode(mode))


@dataclass(frozen=True, eq=False)
class GridFn:
    """Immutable real-valued function sampled on the nodes of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.N,):
            raise ValueError(f"expected {self.grid.N} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function contains NaN or Inf")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, grid: Grid, f) -> "GridFn":
        return cls(grid, f(grid.x))

    @classmethod
    def zeros(cls, grid: Grid) -> "GridFn":
        return cls(grid, np.zeros(grid.N))

    def _other(self, other):
        if isinstance(other, GridFn):
            _check_same_grid(self, other)
            return other.values
        return other

    def __add__(self, other):
        return GridFn(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFn(self.grid, self.values - self._other(other))

    def __rsub__(self, other):
        return GridFn(self.grid, self._other(other) - self.values)

    def __mul__(self, other):
        return GridFn(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFn(self.grid, -self.values)

    def __len__(self):
        return self.grid.N


def _check_same_grid(u: GridFn, v: GridFn):
    if u.grid != v.grid:
        raise ValueError("grid functions live on different grids")


# -- array-level stencils (used directly by the solvers) --------------------


def shift(v: np.ndarray, k: int, periodic: bool) -> np.ndarray:
    """Return s with s_j = v_{j+k}."""
    if periodic:
        return np.roll(v, -k)
    out = np.zeros_like(v)
    n = len(v)
    if k >= 0:
        out[: n - k] = v[k:]
    else:
        out[-k:] = v[: n + k]
    return out


def dplus(v, dx, periodic=True):
    return (shift(v, 1, periodic) - v) / dx


def dminus(v, dx, periodic=True):
    return (v - shift(v, -1, periodic)) / dx


def dcentral(v, dx, periodic=True):
    return (shift(v, 1, periodic) - shift(v, -1, periodic)) / (2 * dx)


def bar(v, periodic=True):
    return 0.5 * (shift(v, 1, periodic) + shift(v, -1, periodic))


def tilde(v, periodic=True):
    return (shift(v, 1, periodic) + v + shift(v, -1, periodic)) / 3.0


def apply_stencil(kind: Stencil | str, u: GridFn) -> GridFn:
    kind = Stencil(kind)
    g = u.grid
    v, p = u.values, g.periodic
    if kind is Stencil.DPLUS:
        out = dplus(v, g.dx, p)
    elif kind is Stencil.DMINUS:
        out = dminus(v, g.dx, p)
    elif kind is Stencil.DCENTRAL:
        out = dcentral(v, g.dx, p)
    elif kind is Stencil.SPLUS:
        out = shift(v, 1, p)
    elif kind is Stencil.SMINUS:
        out = shift(v, -1, p)
    elif kind is Stencil.BAR:
        out = bar(v, p)
    else:
        out = tilde(v, p)
    return GridFn(g, out)


# -- inner products and norms ------------------------------------------------


def inner(u: GridFn, v: GridFn) -> float:
    """Uniform-weight l2 inner product dx * sum(u_j v_j)."""
    _check_same_grid(u, v)
    return float(u.grid.dx * np.dot(u.values, v.values))


def norm_l2(u: GridFn) -> float:
    return float(np.sqrt(u.grid.dx) * np.linalg.norm(u.values))


def norm_sup(u: GridFn) -> float:
    return float(np.max(np.abs(u.values)))


def norm_h2(u: GridFn) -> float:
    """||u|| + ||D+ u|| + ||D+ D- u||."""
    g = u.grid
    v, p = u.values, g.periodic
    d1 = dplus(v, g.dx, p)
    d2 = dplus(dminus(v, g.dx, p), g.dx, p)
    return norm_l2(u) + norm_l2(GridFn(g, d1)) + norm_l2(GridFn(g, d2))
