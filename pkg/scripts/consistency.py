"""Lattice operator vs quadrature of the singular integral for exp(-x^2) on [-20, 20]."""

import argparse
import csv
from pathlib import Path

import numpy as np

from fkdv.experiments import convergence_rate
from fkdv.fraclap import consistency_study
from fkdv.grid import build_grid


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--alphas", default="1.0,1.3,1.5,1.9")
    p.add_argument("--Ns", default="128,256,512,1024")
    p.add_argument("--out", default="results")
    args = p.parse_args()
    Ns = [int(n) for n in args.Ns.split(",")]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [["alpha", "N", "dx", "error", "rate"]]
    for alpha in map(float, args.alphas.split(",")):
        grids = [build_grid(-20, 20, N, "truncated") for N in Ns]
        res = consistency_study(lambda x: np.exp(-x * x), grids, alpha)
        for i, (N, (dx, err)) in enumerate(zip(Ns, res)):
            rate = ""
            if i and err > 0 and res[i - 1][1] > 0:
                rate = f"{convergence_rate(res[i - 1][1], err, Ns[i - 1], N):.4f}"
            rows.append([f"{alpha:g}", str(N), f"{dx:.6g}", f"{err:.6e}", rate])
    with open(out / "consistency.csv", "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    for r in rows:
        print("  ".join(c.rjust(12) for c in r))


if __name__ == "__main__":
    main()
