"""Benjamin-Ono travelling wave, alpha = 1, one temporal period (t = 120)."""

from _common import parser, setup, study

from fkdv.reference import make_preset
from fkdv.steppers import SchemeConfig


def main():
    p = parser(__doc__, (64, 128, 256, 512, 1024))
    p.add_argument("--T", type=float, default=120.0, help="final time (20 and 100 are also of interest)")
    p.add_argument("--periodization", default="images", choices=["images", "nearest"])
    args = p.parse_args()
    Ns, out = setup(args)
    preset = make_preset("bo", t_final=args.T)
    for scheme in ("cn", "ei"):
        cfg = SchemeConfig(alpha=1.0, scheme=scheme, periodization=args.periodization)
        study(preset, cfg, Ns, out, f"bo_{scheme}_t{args.T:g}", args.timing)


if __name__ == "__main__":
    main()
