"""Linear solves with the dispersive system matrix M = I + theta * (frac. Laplacian o D).

The composite operator is skew-symmetric, so <Mw, w> = ||w||^2 and M is
always invertible with ||w|| <= ||Mw||.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import LinearOperator, gmres

from .fraclap import FracLapOp, dispersive_array
from .grid import GridFn


class Backend(str, Enum):
    SPECTRAL = "circulant_spectral"
    DENSE = "dense_lu"
    ITERATIVE = "iterative"


class SolverError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (relative residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True, eq=False)
class DispersiveSystem:
    op: FracLapOp
    theta: float
    backend: Backend
    tol: float = 1e-12
    max_iter: int = 500
    _symbol: np.ndarray | None = field(default=None, repr=False)
    _lu: tuple | None = field(default=None, repr=False)

    @property
    def grid(self):
        return self.op.grid

    def symbol(self) -> np.ndarray:
        """Complex rfft multipliers sigma_m = 1 + theta * lambda_m * i mu_m."""
        if self._symbol is None:
            raise ValueError("symbol only available for the circulant_spectral backend")
        return self._symbol

    def matvec(self, w: np.ndarray) -> np.ndarray:
        return w + self.theta * dispersive_array(self.op, w)


def default_backend(op: FracLapOp) -> Backend:
    return Backend.SPECTRAL if op.grid.periodic else Backend.DENSE


def build_system(
    op: FracLapOp, theta: float, backend: Backend | str | None = None, tol: float = 1e-12
) -> DispersiveSystem:
    # a negative theta is allowed so that steps can be run backwards in time
    if not np.isfinite(theta) or theta == 0:
        raise ValueError(f"theta must be a finite nonzero number, got {theta}")
    backend = default_backend(op) if backend is None else Backend(backend)
    sym = lu = None
    if backend is Backend.SPECTRAL:
        if not op.grid.periodic:
            raise ValueError("circulant_spectral backend requires a periodic grid")
        N, dx = op.N, op.grid.dx
        mu = np.sin(2 * np.pi * np.arange(N // 2 + 1) / N) / dx
        sym = 1.0 + theta * op.symbol() * 1j * mu
    elif backend is Backend.DENSE:
        M = np.eye(op.N) + theta * op.dense_dispersive()
        lu = linalg.lu_factor(M, check_finite=False)
    return DispersiveSystem(op, float(theta), backend, tol, _symbol=sym, _lu=lu)


def solve_array(system: DispersiveSystem, rhs: np.ndarray) -> np.ndarray:
    if system.backend is Backend.SPECTRAL:
        return np.fft.irfft(np.fft.rfft(rhs) / system.symbol(), n=system.op.N)
    if system.backend is Backend.DENSE:
        return linalg.lu_solve(system._lu, rhs, check_finite=False)
    scale = np.linalg.norm(rhs)
    if scale == 0:
        return np.zeros_like(rhs)
    N = system.op.N
    A = LinearOperator((N, N), matvec=system.matvec, dtype=float)
    w, info = gmres(
        A, rhs, rtol=system.tol, atol=0.0, restart=min(N, 200), maxiter=system.max_iter
    )
    res = np.linalg.norm(system.matvec(w) - rhs) / scale
    if info != 0 or res > 10 * system.tol:
        raise SolverError("iterative solve did not converge", res)
    return w


def solve(system: DispersiveSystem, rhs: GridFn) -> GridFn:
    """Return w with (I + theta * frac.Laplacian(D w)) = rhs."""
    if rhs.grid != system.grid:
        raise ValueError("right-hand side lives on a different grid")
    return GridFn(rhs.grid, solve_array(system, rhs.values))


def residual(system: DispersiveSystem, w: np.ndarray, rhs: np.ndarray) -> float:
    """Relative residual ||Mw - rhs|| / ||rhs|| (0 when rhs vanishes)."""
    scale = np.linalg.norm(rhs)
    r = np.linalg.norm(system.matvec(w) - rhs)
    return float(r / scale) if scale > 0 else float(r)
