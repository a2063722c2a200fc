"""One geometry where a single particle is not trapped but the pair is.

Runs the one-particle certificate and the two-particle trial bound on the
same cavity and prints both margins.

    python scripts/combined_demo.py --L 153 --c 0.25 --eps-prime 0.5
"""

import argparse

from wglab.domain_grid import WaveguideParams
from wglab.one_particle import PI2, Numerics, default_window_spacing, one_particle_unbound_certificate
from wglab.two_particle import m_rule, variational_bound_bulge


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=float, default=153.0)
    ap.add_argument("--c", type=float, default=0.25)
    ap.add_argument("--eps-prime", type=float, default=0.5, help="window as a fraction of h")
    ap.add_argument("--spacing", type=float, default=1 / 16)
    args = ap.parse_args()

    pair = variational_bound_bulge(args.L, m_rule(args.L, args.c))
    p = WaveguideParams(pair.L, pair.h, pair.h * args.eps_prime, pair.alpha)
    num = Numerics(spacing=args.spacing)
    cert = one_particle_unbound_certificate(p, num, default_window_spacing(p, num.spacing))
    print(f"cavity L = {pair.L:g}, h = {pair.h:.8f}, window eps = {p.epsilon:.6f}, alpha = {pair.alpha:.3e}")
    print(f"one particle: lambda(eps) - pi^2 = {cert.notes['lambda_eps'] - PI2:.4e} "
          f"(budget {cert.notes['budget']:.2e}) -> {cert.status}")
    print(f"two particles: bound - threshold = {pair.margin:.4e} -> "
          f"{'bound state' if pair.margin < 0 else 'no conclusion'}")


if __name__ == "__main__":
    main()
