"""Two-particle trial bound along M = 1 + c/L^2: margin table and smallest binding L.

    python scripts/binding_window.py --c 0.25 --L-min 10 --L-max 500
"""

import argparse
from pathlib import Path

from wglab import svg
from wglab.two_particle import (binding_window_search, geometric_L_grid, m_rule,
                                smallest_binding_integer_L, variational_bound_bulge)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", type=float, default=0.25)
    ap.add_argument("--L-min", type=float, default=10.0)
    ap.add_argument("--L-max", type=float, default=500.0)
    ap.add_argument("--count", type=int, default=25)
    ap.add_argument("--svg", type=Path)
    args = ap.parse_args()

    search = binding_window_search(geometric_L_grid(args.L_min, args.L_max, args.count), args.c)
    print(f"{'L':>9} {'h':>10} {'margin':>12} {'large-L form':>13} {'w excess':>10}")
    for r in search.rows:
        print(f"{r.L:9.3f} {r.h:10.7f} {r.margin:12.4e} {r.asymptotic_margin:13.4e} {r.w_excess:10.2e}")
    L_star = smallest_binding_integer_L(int(args.L_min), int(args.L_max), args.c)
    if L_star is None:
        print(f"no binding L in range; best margin {search.best.margin:.4e} at L = {search.best.L:.2f}")
    else:
        r = variational_bound_bulge(float(L_star), m_rule(L_star, args.c))
        print(f"smallest integer L with negative margin: {L_star} (margin {r.margin:.4e}, h = {r.h:.8f})")
    print(f"most negative margin {search.best.margin:.4e} at L = {search.best.L:.2f}")
    if args.svg:
        Ls = [r.L for r in search.rows]
        args.svg.write_text(svg.line_plot(Ls, {"margin": [r.margin for r in search.rows],
                                               "large-L form": [r.asymptotic_margin for r in search.rows]},
                                          xlabel="L", ylabel="bound - threshold", title="binding margin",
                                          logx=True, hline=0.0))


if __name__ == "__main__":
    main()
