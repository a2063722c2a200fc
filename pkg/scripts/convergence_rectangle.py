"""Grid convergence on a Dirichlet rectangle against pi^2 (1/L^2 + 1/h^2).

    python scripts/convergence_rectangle.py --L 1 --h 1 --spacing 0.015625 --levels 4
"""

import argparse
import math

from wglab.domain_grid import BC, assemble_operator, build_rectangle, discretize
from wglab.eigensolve import lowest_eigenpairs, richardson_extrapolate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=float, default=1.0)
    ap.add_argument("--h", type=float, default=1.0)
    ap.add_argument("--spacing", type=float, default=1 / 64)
    ap.add_argument("--levels", type=int, default=3)
    args = ap.parse_args()

    exact = math.pi ** 2 * (args.L ** -2 + args.h ** -2)
    dom = build_rectangle((0, args.L), (0, args.h), BC.DIRICHLET)
    spacings = [args.spacing / 2 ** k for k in range(args.levels)]
    vals = []
    for s in spacings:
        vals.append(lowest_eigenpairs(assemble_operator(dom, discretize(dom, s)), 1).ground)
        print(f"s = {s:.6f}  lambda = {vals[-1]:.12f}  error {vals[-1] - exact:+.3e}")
    rep = richardson_extrapolate(vals, spacings)
    print(f"extrapolated {rep.value:.12f}  rel error {abs(rep.value - exact) / exact:.2e}  "
          f"observed order {rep.observed_order:.3f}")


if __name__ == "__main__":
    main()
