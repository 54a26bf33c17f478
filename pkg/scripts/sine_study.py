"""Sine initial data, alpha = 1.5, t = 5, errors against a fine-grid Crank-Nicolson run."""

from _common import parser, setup, study

from fkdv.reference import make_preset
from fkdv.steppers import SchemeConfig


def main():
    p = parser(__doc__, (250, 500, 1000, 2000, 4000))
    p.add_argument("--N-ref", type=int, default=8000, help="reference grid (32000 for the full run)")
    p.add_argument("--alpha", type=float, default=1.5)
    args = p.parse_args()
    Ns, out = setup(args)
    preset = make_preset("sine", alpha=args.alpha)
    for scheme in ("cn", "ei"):
        cfg = SchemeConfig(alpha=args.alpha, scheme=scheme)
        study(preset, cfg, Ns, out, f"sine_{scheme}", args.timing, N_ref=args.N_ref)


if __name__ == "__main__":
    main()
