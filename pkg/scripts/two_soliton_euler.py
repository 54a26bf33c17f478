"""Two-soliton collision, alpha = 1.999, Euler implicit from t = -10 to t = 10.

The N = 32000 row is slow; pass it explicitly with --Ns.
"""

from _common import parser, setup, study

from fkdv.reference import make_preset
from fkdv.steppers import SchemeConfig


def main():
    p = parser(__doc__, (2000, 4000, 8000))
    p.add_argument("--alpha", type=float, default=1.999)
    args = p.parse_args()
    Ns, out = setup(args)
    preset = make_preset("kdv2", "euler_implicit", alpha=args.alpha)
    study(preset, SchemeConfig(alpha=args.alpha, scheme="ei"), Ns, out, "two_soliton_ei", args.timing)


if __name__ == "__main__":
    main()
