"""Discrete mass, momentum and energy, and their ratios to the initial values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridFn, norm_l2


@dataclass(frozen=True)
class InvariantTriple:
    mass: float
    momentum: float
    energy: float | None = None

    def as_tuple(self):
        return (self.mass, self.momentum, self.energy)


def wavenumbers(grid) -> np.ndarray:
    """Non-negative rfft wavenumbers 2*pi*m/(b - a)."""
    return 2 * np.pi * np.fft.rfftfreq(grid.N, d=grid.dx)


def fractional_half_power(u: GridFn, alpha: float) -> np.ndarray:
    """(-Delta)^{alpha/4} u through the multiplier |xi|^{alpha/2} (periodic grids)."""
    if not u.grid.periodic:
        raise ValueError("the spectral fractional power needs a periodic grid")
    mult = wavenumbers(u.grid) ** (alpha / 2)
    return np.fft.irfft(mult * np.fft.rfft(u.values), n=u.grid.N)


def mass(u: GridFn) -> float:
    return float(u.grid.dx * np.sum(u.values))


def momentum(u: GridFn) -> float:
    return norm_l2(u)


def energy(u: GridFn, alpha: float) -> float:
    h = fractional_half_power(u, alpha)
    return float(u.grid.dx * np.sum(h * h - u.values**3 / 3))


def compute_invariants(u: GridFn, alpha: float, with_energy: bool = True) -> InvariantTriple:
    e = energy(u, alpha) if with_energy else None
    return InvariantTriple(mass(u), momentum(u), e)


def _ratio(name, num, den, scale, strict):
    if num is None or den is None:
        return None
    if abs(den) <= 1e-12 * scale:
        if not strict:
            return None
        raise ZeroDivisionError(f"initial {name} vanishes; its ratio is undefined")
    return num / den


def normalized_invariants(
    u: GridFn, u0: GridFn, alpha: float, with_energy: bool = True, strict: bool = True
):
    """Componentwise ratios (C1, C2, C3) of the invariants of u to those of u0.

    C2 is a ratio of l2 norms, not of squared norms.  C3 is None when the
    energy is not requested.  A vanishing initial invariant raises, or yields
    None for that component when ``strict`` is False.
    """
    now = compute_invariants(u, alpha, with_energy)
    ref = compute_invariants(u0, alpha, with_energy)
    dx = u0.grid.dx
    v = u0.values
    mass_scale = dx * np.sum(np.abs(v))
    energy_scale = None
    if with_energy:
        h = fractional_half_power(u0, alpha)
        energy_scale = dx * np.sum(h * h + np.abs(v) ** 3 / 3)
    return (
        _ratio("mass", now.mass, ref.mass, mass_scale, strict),
        _ratio("momentum", now.momentum, ref.momentum, norm_l2(u0) or 1.0, strict),
        _ratio("energy", now.energy, ref.energy, energy_scale, strict),
    )
