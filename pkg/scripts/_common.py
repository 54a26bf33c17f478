"""Shared plumbing for the convergence-study scripts."""

import argparse
import logging
from pathlib import Path

from fkdv.experiments import StudyConfig, run_convergence


def parser(description, Ns):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--Ns", default=",".join(map(str, Ns)), help="comma-separated grid sizes")
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--timing", action="store_true", help="fill the wall_s column")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def setup(args):
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return [int(n) for n in args.Ns.split(",")], out


def study(preset, cfg, Ns, out, stem, timing=False, **kw):
    report = run_convergence(StudyConfig(preset, cfg, tuple(Ns), timing=timing, **kw))
    (out / f"{stem}.csv").write_text(report.to_csv())
    print(f"{stem}\n{report.table()}\n")
    return report
