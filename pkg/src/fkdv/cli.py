"""Command-line front end: ``fkdv {run,convergence,consistency,invariants}``.

Settings come from an optional flat ``key = value`` file (``--config``) and
are overridden by command-line flags.  Exit status: 0 success, 1 invalid
input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .experiments import StudyConfig, run_convergence
from .fraclap import QuadratureError, consistency_study
from .grid import build_grid
from .invariants import normalized_invariants
from .linsolve import SolverError
from .reference import PresetName, make_initial, make_preset
from .steppers import FixedPointError, SchemeConfig, StepError, evolve

log = logging.getLogger("fkdv")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2

# key -> parser for values read from a config file
CONFIG_KEYS = {
    "preset": str,
    "scheme": str,
    "alpha": float,
    "alphas": str,
    "N": int,
    "Ns": str,
    "domain_a": float,
    "domain_b": float,
    "mode": str,
    "T": float,
    "dt_policy": str,
    "dt": float,
    "delta": float,
    "L": float,
    "fp_tol": float,
    "fp_max_iters": int,
    "solver_tol": float,
    "solver_backend": str,
    "N_ref": int,
    "snapshot_stride": int,
    "output_dir": str,
    "periodization": str,
    "timing": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


class ValidationError(ValueError):
    pass


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, values are unquoted."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValidationError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from None
    return out


def _int_list(s):
    return [int(v) for v in str(s).split(",") if v.strip()]


def _float_list(s):
    return [float(v) for v in str(s).split(",") if v.strip()]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key = value settings file")
    for key, typ in CONFIG_KEYS.items():
        flag = "--" + key.replace("_", "-")
        if key == "timing":
            common.add_argument(flag, action="store_const", const=True, default=None)
        else:
            common.add_argument(flag, dest=key, type=typ if typ is not str else str, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="fkdv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="single simulation with snapshot CSVs")
    sub.add_parser("convergence", parents=[common], help="grid-refinement study table")
    sub.add_parser("consistency", parents=[common], help="operator consistency over a dx ladder")
    sub.add_parser("invariants", parents=[common], help="C1, C2, C3 along a run")
    return parser


def _settings(args) -> dict:
    settings = read_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _scheme_config(s: dict, alpha: float) -> SchemeConfig:
    kwargs = {"alpha": alpha}
    for key, field in (
        ("scheme", "scheme"), ("dt_policy", "dt_policy"), ("dt", "dt"), ("delta", "delta"),
        ("L", "L"), ("fp_tol", "fp_tol"), ("fp_max_iters", "fp_max_iters"),
        ("solver_tol", "solver_tol"), ("solver_backend", "backend"),
        ("periodization", "periodization"),
    ):
        if key in s:
            kwargs[field] = s[key]
    return SchemeConfig(**kwargs)


def _preset(s: dict, alpha=None):
    scheme = SchemeConfig(scheme=s.get("scheme", "cn")).scheme.value
    overrides = {"alpha": alpha if alpha is not None else s.get("alpha"), "t_final": s.get("T")}
    if "domain_a" in s or "domain_b" in s:
        base = make_preset(s.get("preset", "bo"), scheme)
        overrides["domain"] = (s.get("domain_a", base.domain[0]), s.get("domain_b", base.domain[1]))
    return make_preset(s.get("preset", "bo"), scheme, **overrides)


def _outdir(s) -> Path:
    out = Path(s.get("output_dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def cmd_run(s) -> int:
    preset = _preset(s)
    cfg = _scheme_config(s, preset.alpha)
    a, b = preset.domain
    grid = build_grid(a, b, s.get("N", 512), s.get("mode", "periodic"))
    traj = evolve(make_initial(preset, grid), preset.t_final, cfg, s.get("snapshot_stride", 0))
    out = _outdir(s)
    for t, u in zip(traj.times, traj.snapshots):
        _write_csv(out / f"u_t{t:.6f}.csv", ["x", "u"],
                   [(f"{x:.12g}", f"{v:.17g}") for x, v in zip(grid.x, u.values)])
    print(f"wrote {len(traj.times)} snapshots to {out}")
    return EXIT_OK


def cmd_convergence(s) -> int:
    alphas = _float_list(s["alphas"]) if "alphas" in s else [s.get("alpha")]
    Ns = _int_list(s.get("Ns", "64,128,256,512"))
    out = _outdir(s)
    chunks, tables = [], []
    for alpha in alphas:
        preset = _preset(s, alpha)
        cfg = _scheme_config(s, preset.alpha)
        study = StudyConfig(preset, cfg, tuple(Ns), s.get("mode", "periodic"),
                            s.get("N_ref", 8000), bool(s.get("timing", False)))
        report = run_convergence(study)
        chunks.append(report.to_csv(with_header=not chunks))
        tables.append(report.table())
    (out / "convergence.csv").write_text("".join(chunks))
    text = "\n\n".join(tables)
    (out / "convergence.txt").write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_consistency(s) -> int:
    alpha = s.get("alpha", 1.5)
    Ns = _int_list(s.get("Ns", "128,256,512,1024"))
    a, b = s.get("domain_a", -20.0), s.get("domain_b", 20.0)
    grids = [build_grid(a, b, N, s.get("mode", "truncated")) for N in Ns]
    rows = consistency_study(lambda x: np.exp(-x * x), grids, alpha)
    out_rows = []
    for i, (N, (dx, err)) in enumerate(zip(Ns, rows)):
        rate = ""
        if i and err > 0 and rows[i - 1][1] > 0:
            rate = f"{np.log(rows[i - 1][1] / err) / np.log(N / Ns[i - 1]):.10g}"
        out_rows.append([str(N), f"{dx:.10g}", f"{err:.10g}", rate])
    _write_csv(_outdir(s) / "consistency.csv", ["N", "dx", "error", "rate"], out_rows)
    for r in [["N", "dx", "error", "rate"]] + out_rows:
        print("  ".join(c.rjust(16) for c in r))
    return EXIT_OK


def cmd_invariants(s) -> int:
    preset = _preset(s)
    cfg = _scheme_config(s, preset.alpha)
    a, b = preset.domain
    grid = build_grid(a, b, s.get("N", 256), s.get("mode", "periodic"))
    u0 = make_initial(preset, grid)
    traj = evolve(u0, preset.t_final, cfg, s.get("snapshot_stride", 10))
    with_energy = grid.periodic and preset.name is not PresetName.KDV2
    rows = []
    for t, u in zip(traj.times, traj.snapshots):
        c = normalized_invariants(u, u0, cfg.alpha, with_energy, strict=False)
        rows.append([f"{t:.10g}"] + ["" if v is None else f"{v:.15g}" for v in c])
    _write_csv(_outdir(s) / "invariants.csv", ["t", "C1", "C2", "C3"], rows)
    print(f"wrote {len(rows)} rows to {_outdir(s) / 'invariants.csv'}")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "convergence": cmd_convergence,
    "consistency": cmd_consistency,
    "invariants": cmd_invariants,
}


def cli_main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        settings = _settings(args)
        return COMMANDS[args.command](settings)
    except (StepError, FixedPointError, SolverError, QuadratureError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
