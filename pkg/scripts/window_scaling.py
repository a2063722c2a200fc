"""Cavity eigenvalue shift against window size, with the fitted power law.

    python scripts/window_scaling.py --L 1.5 --h 1.2 --eps 0.2 0.1 0.05 --svg window.svg
"""

import argparse
from pathlib import Path

from wglab import svg
from wglab.domain_grid import WaveguideParams
from wglab.one_particle import Numerics, gadylshin_exponent, lambda0_exact


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=float, default=1.5)
    ap.add_argument("--h", type=float, default=1.2)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    ap.add_argument("--spacing", type=float, default=1 / 40)
    ap.add_argument("--svg", type=Path)
    args = ap.parse_args()

    fit = gadylshin_exponent(WaveguideParams(args.L, args.h, max(args.eps)), args.eps,
                             Numerics(spacing=args.spacing))
    lam0 = lambda0_exact(args.L, args.h)
    print(f"lambda(0) = {lam0:.10f}   finest spacing {fit.spacings[-1]:.3g}")
    print(f"{'eps':>8} {'lambda(0)-lambda(eps)':>22} {'error':>10}")
    for e, d, err in zip(fit.epsilons, fit.deltas, fit.errors):
        print(f"{e:8.4f} {d:22.10f} {err:10.2e}")
    print(f"fitted exponent {fit.slope:.4f}")
    if args.svg:
        args.svg.write_text(svg.line_plot(fit.epsilons, {"shift": fit.deltas}, xlabel="eps", ylabel="shift",
                                          title=f"exponent {fit.slope:.3f}", logx=True, logy=True))


if __name__ == "__main__":
    main()
