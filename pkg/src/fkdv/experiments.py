"""Error measures, convergence rates and grid-refinement studies."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .grid import GridFn, build_grid
from .invariants import normalized_invariants
from .reference import ExperimentPreset, PresetName, make_initial, restrict
from .steppers import Scheme, SchemeConfig, evolve, select_dt

log = logging.getLogger(__name__)

CSV_HEADER = ["scheme", "alpha", "N", "dx", "dt", "error", "rate", "C1", "C2", "C3", "fp_iters", "wall_s"]

SHORT_SCHEME = {Scheme.CN: "cn", Scheme.EI: "ei", Scheme.SPLIT: "split"}


def trapezoid_weights(grid) -> np.ndarray:
    w = np.full(grid.N, grid.dx)
    if not grid.periodic:
        w[0] = w[-1] = 0.5 * grid.dx
    return w


def trapezoid_norm(u: GridFn) -> float:
    return float(np.sqrt(np.sum(trapezoid_weights(u.grid) * u.values**2)))


def relative_l2_error(u_num: GridFn, u_ref: GridFn) -> float:
    if u_num.grid != u_ref.grid:
        raise ValueError("solutions live on different grids")
    den = trapezoid_norm(u_ref)
    if den == 0:
        raise ZeroDivisionError("reference solution has zero norm")
    return trapezoid_norm(u_num - u_ref) / den


def convergence_rate(e1: float, e2: float, N1: int, N2: int) -> float:
    """(ln e1 - ln e2) / (ln N2 - ln N1)."""
    if e1 <= 0 or e2 <= 0:
        raise ValueError("errors must be positive to form a rate")
    if not 0 < N1 < N2:
        raise ValueError("need 0 < N1 < N2")
    return (math.log(e1) - math.log(e2)) / (math.log(N2) - math.log(N1))


@dataclass
class ConvergenceRow:
    N: int
    dx: float
    dt: float | None = None
    error: float | None = None
    rate: float | None = None
    C1: float | None = None
    C2: float | None = None
    C3: float | None = None
    fp_iters: float | None = None
    wall_s: float | None = None
    failure: str | None = None


@dataclass
class ConvergenceReport:
    scheme: Scheme
    alpha: float
    rows: list = field(default_factory=list)

    @property
    def errors(self):
        return [r.error for r in self.rows]

    @property
    def rates(self):
        return [r.rate for r in self.rows[1:]]

    def csv_rows(self, with_header=True):
        out = [CSV_HEADER] if with_header else []
        for r in self.rows:
            out.append([
                SHORT_SCHEME[self.scheme], _fmt(self.alpha), str(r.N), _fmt(r.dx), _fmt(r.dt),
                _fmt(r.error), _fmt(r.rate), _fmt(r.C1), _fmt(r.C2), _fmt(r.C3),
                _fmt(r.fp_iters), _fmt(r.wall_s),
            ])
        return out

    def to_csv(self, with_header=True) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(self.csv_rows(with_header))
        return buf.getvalue()

    def table(self) -> str:
        rows = self.csv_rows()
        widths = [max(len(r[i]) for r in rows) for i in range(len(CSV_HEADER))]
        lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
        for r in self.rows:
            if r.failure:
                lines.append(f"# N={r.N} failed: {r.failure}")
        return "\n".join(lines)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(v)
    return f"{v:.10g}"


@dataclass(frozen=True)
class StudyConfig:
    preset: ExperimentPreset
    scheme: SchemeConfig
    Ns: tuple
    mode: str = "periodic"
    N_ref: int = 8000
    timing: bool = False

    def __post_init__(self):
        Ns = tuple(int(n) for n in self.Ns)
        if not Ns or any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ValueError(f"Ns must be non-empty and strictly increasing, got {Ns}")
        object.__setattr__(self, "Ns", Ns)


class ReferenceCache:
    """Fine-grid Crank-Nicolson reference, computed once per study."""

    def __init__(self, preset, cfg, N_ref, mode):
        self.preset, self.cfg, self.N_ref, self.mode = preset, cfg, N_ref, mode
        self._final = None

    def on(self, grid) -> GridFn:
        if self.N_ref % grid.N:
            raise ValueError(f"N_ref={self.N_ref} is not divisible by N={grid.N}")
        if self._final is None:
            a, b = self.preset.domain
            fine = build_grid(a, b, self.N_ref, self.mode)
            log.info("computing fine-grid reference with N=%d", self.N_ref)
            traj = evolve(make_initial(self.preset, fine), self.preset.t_final,
                          self.cfg.replace(scheme=Scheme.CN))
            self._final = traj.final
        return restrict(self._final, grid)


def _wants_invariants(preset, scheme):
    if preset.name is PresetName.KDV2:
        return scheme is Scheme.CN, False
    return True, True


def run_single(preset: ExperimentPreset, cfg: SchemeConfig, N: int, mode="periodic",
               reference: ReferenceCache | None = None, timing=False) -> ConvergenceRow:
    a, b = preset.domain
    grid = build_grid(a, b, N, mode)
    row = ConvergenceRow(N=N, dx=grid.dx)
    start = time.perf_counter()
    u0 = make_initial(preset, grid)
    row.dt = select_dt(u0, cfg)
    traj = evolve(u0, preset.t_final, cfg)
    u = traj.final
    if preset.has_exact:
        ref = GridFn(grid, preset.exact(grid.x, preset.t_final))
    else:
        ref = reference.on(grid)
    row.error = relative_l2_error(u, ref)
    want, with_energy = _wants_invariants(preset, cfg.scheme)
    if want:
        # zero-mean data (the sine preset) has no meaningful mass ratio
        row.C1, row.C2, row.C3 = normalized_invariants(u, u0, cfg.alpha, with_energy, strict=False)
    row.fp_iters = float(np.mean([r.fp_iterations for r in traj.reports]))
    if timing:
        row.wall_s = time.perf_counter() - start
    return row


def run_convergence(study: StudyConfig) -> ConvergenceReport:
    """Grid-refinement study; failures are recorded per row and the study continues."""
    preset, cfg = study.preset, study.scheme
    report = ConvergenceReport(cfg.scheme, cfg.alpha)
    reference = None
    if not preset.has_exact:
        reference = ReferenceCache(preset, cfg, study.N_ref, study.mode)
    for N in study.Ns:
        try:
            row = run_single(preset, cfg, N, study.mode, reference, study.timing)
        except (ArithmeticError, RuntimeError, ValueError) as exc:
            log.warning("N=%d failed: %s", N, exc)
            a, b = preset.domain
            row = ConvergenceRow(N=N, dx=(b - a) / N, failure=str(exc))
        report.rows.append(row)
    prev = None
    for row in report.rows:
        if prev is not None and prev.error and row.error:
            row.rate = convergence_rate(prev.error, row.error, prev.N, row.N)
        prev = row
    return report
