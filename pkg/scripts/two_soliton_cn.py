"""Two-soliton collision, alpha = 1.999, Crank-Nicolson from t = -20 to t = 20."""

import numpy as np
from _common import parser, setup, study

from fkdv.grid import build_grid
from fkdv.reference import make_initial, make_preset
from fkdv.steppers import SchemeConfig, evolve


def main():
    p = parser(__doc__, (250, 500, 1000, 2000, 4000))
    p.add_argument("--alpha", type=float, default=1.999)
    p.add_argument("--profile-N", type=int, default=1000, help="grid for the profile snapshots")
    args = p.parse_args()
    Ns, out = setup(args)
    preset = make_preset("kdv2", "crank_nicolson", alpha=args.alpha)
    cfg = SchemeConfig(alpha=args.alpha, scheme="cn")
    study(preset, cfg, Ns, out, "two_soliton_cn", args.timing)

    # numerical vs exact profiles at the initial, collision and final times
    g = build_grid(*preset.domain, args.profile_N)
    traj = evolve(make_initial(preset, g), preset.t_final, cfg, snapshot_stride=1)
    times = np.array(traj.times)
    cols, names = [g.x], ["x"]
    for target in (0.0, 20.0, 40.0):
        k = int(np.argmin(np.abs(times - target)))
        cols += [traj.snapshots[k].values, preset.exact(g.x, times[k])]
        names += [f"u_t{times[k]:.2f}", f"exact_t{times[k]:.2f}"]
    np.savetxt(out / "two_soliton_profiles.csv", np.column_stack(cols), delimiter=",",
               header=",".join(names), comments="", fmt="%.12g")


if __name__ == "__main__":
    main()
