"""Half-line pair: trial bound, truncation doubling and the direct quarter-plane solve.

    python scripts/wedge_study.py --alpha 1 --extent 8 --spacing 0.03125
"""

import argparse
import math

from wglab.neumann_halfline import neumann_study, optimize_halfline_epsilon


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--extent", type=float, default=8.0)
    ap.add_argument("--spacing", type=float, default=1 / 32)
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--bound-only", action="store_true", help="skip the 2D solves")
    args = ap.parse_args()

    thr = math.sqrt(2 * args.alpha)
    if args.bound_only:
        v = optimize_halfline_epsilon(args.alpha)
        print(f"trial bound {v.bound:.8f} at eps = {v.epsilon:.6f}; threshold {thr:.8f}")
        return
    st = neumann_study(args.alpha, args.extent, args.spacing, args.levels)
    v, d, n = st.variational, st.dirichlet.report, st.neumann.report
    print(f"threshold sqrt(2 alpha)   {thr:.8f}")
    print(f"trial bound               {v.bound:.8f}  (eps = {v.epsilon:.6f})")
    print(f"Dirichlet far faces       {d.value:.8f}  raw {', '.join(f'{x:.8f}' for x in d.notes['raw'])}")
    print(f"Neumann far faces         {n.value:.8f}  raw {', '.join(f'{x:.8f}' for x in n.notes['raw'])}")
    print(f"doubling study            X = {st.truncation.extents}, converged at {st.truncation.extent:g}")
    print(f"budget {st.budget:.2e}; exchange asymmetry {st.dirichlet.exchange_asymmetry:.1e}")


if __name__ == "__main__":
    main()
