"""Two bosons in the waveguide coupled by a harmonic attraction.

In centre-of-mass variables ``u = (x1 + x2)/2``, ``w = (x2 - x1)/2`` the
two-particle operator reads

    -1/2 d_uu - 1/2 d_ww + 4 alpha w^2 - d_y1y1 - d_y2y2 + alpha (y2 - y1)^2.

Two things are computed here: a lower bound on the bottom of the essential
spectrum, ``sqrt(2 alpha) + 2 pi^2`` in the limit, and an explicit product
test function in the bulge whose Rayleigh quotient falls below it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .domain_grid import BC, assemble_operator, build_rectangle, discretize
from .eigensolve import lowest_eigenpairs, richardson_extrapolate
from .oscillator1d import exact_oscillator, fd_ground, smallest_converged_beta, solve_truncated_oscillator
from .quadrature import gauss_legendre
from .reports import BoundReport, Direction

PI2 = math.pi ** 2
Y_POT_COEFF = (PI2 - 6) / (6 * PI2)


@dataclass(frozen=True)
class CenterOfMassFrame:
    """Coefficients of the operator in ``(u, w, y1, y2)``."""

    alpha: float
    u_weight: float = 0.5
    w_weight: float = 0.5
    y_weight: float = 1.0

    def to_com(self, x1, x2):
        return 0.5 * (x2 + x1), 0.5 * (x2 - x1)

    def from_com(self, u, w):
        return u - w, u + w

    def w_potential(self, w):
        return 4 * self.alpha * np.asarray(w) ** 2

    def y_potential(self, y1, y2):
        return self.alpha * (np.asarray(y2) - np.asarray(y1)) ** 2


# ----------------------------------------------------------------- threshold


def essential_threshold_lower_bound(alpha: float, beta: Optional[float] = None) -> BoundReport:
    """``min(4 alpha beta^2, lambda_beta + 2 pi^2)`` as a lower bound on the essential spectrum.

    Without ``beta`` the smallest ``beta`` (on a 0.25 grid) whose oscillator
    deficit ``sqrt(2 alpha) - lambda_beta`` is below ``1e-8`` is used.
    """
    energy, _ = exact_oscillator(alpha)
    if beta is None:
        osc = smallest_converged_beta(alpha)
        beta = osc.beta
    else:
        if not beta > 0:
            raise ValueError(f"beta must be positive, got {beta}")
        osc = solve_truncated_oscillator(alpha, beta)
    coarse = 4 * alpha * beta ** 2
    fine = osc.lambda_beta + 2 * PI2
    value = min(coarse, fine)
    return BoundReport(
        name="essential_threshold",
        value=value,
        direction=Direction.LOWER_BOUND,
        threshold=energy + 2 * PI2,
        error=osc.extrap_error,
        status="OK",
        notes={"alpha": alpha, "beta": beta, "lambda_beta": osc.lambda_beta, "deficit": osc.gap,
               "branch": "4*alpha*beta^2" if coarse <= fine else "lambda_beta+2pi^2",
               "spacing": osc.spacing},
    )


def transversal_y_eigenvalue(alpha: float, spacing: float = 1 / 32, levels: int = 3,
                             tol: float = 1e-9) -> tuple:
    """Ground energy of ``-d_y1y1 - d_y2y2 + alpha (y2 - y1)^2`` on the Dirichlet unit square.

    Returns ``(mu_y, ExtrapolationReport)``; spacings are ``spacing / 2**k``.
    """
    if not alpha >= 0:
        raise ValueError("alpha must be nonnegative")
    dom = build_rectangle((-0.5, 0.5), (-0.5, 0.5), BC.DIRICHLET, name="y_square")
    spacings = [spacing / 2 ** k for k in range(levels)]
    vals = []
    for s in spacings:
        grid = discretize(dom, s)
        pot = None if alpha == 0 else (lambda y1, y2: alpha * (y2 - y1) ** 2)
        op = assemble_operator(dom, grid, pot, potential_id=f"ydiff:{alpha!r}")
        vals.append(lowest_eigenpairs(op, 1, tol=tol * max(1.0, 4 / s ** 2)).ground)
    rep = richardson_extrapolate(vals, spacings, 2)
    return rep.value, rep


# ----------------------------------------------------------------- variational bound


@dataclass(frozen=True)
class BindingWindowResult:
    L: float
    M: float
    h: float
    alpha: float
    value: float
    threshold: float
    margin: float
    u_term: float
    y_kinetic: float
    y_potential: float
    w_term: float
    w_excess: float
    asymptotic_margin: float
    notes: dict = field(default_factory=dict, compare=False)

    def report(self) -> BoundReport:
        return BoundReport("binding_variational", self.value, Direction.UPPER_BOUND, self.threshold,
                           status="BINDS" if self.margin < 0 else "NO_BINDING",
                           notes={"L": self.L, "M": self.M, "h": self.h})


def bulge_geometry(L: float, M: float) -> tuple:
    """``(alpha, h)`` with ``alpha = L^-2`` and ``h^-2 + L^-2 = M``; rejects ``h <= 1`` or ``M <= 1``."""
    if not (L > 0 and math.isfinite(L)):
        raise ValueError(f"L must be positive, got {L}")
    alpha = L ** -2
    if not M > 1:
        raise ValueError(f"M must exceed 1, got {M}")
    rest = M - alpha
    if not 0 < rest < 1:
        raise ValueError(f"M - L^-2 = {rest} must lie in (0, 1) so that h > 1")
    return alpha, rest ** -0.5


def w_rayleigh_quotient(alpha: float, half_width: float, nodes: int = 64) -> tuple:
    """Rayleigh quotient of ``phi - C`` for ``-1/2 d_ww + 4 alpha w^2`` on ``(-a, a)``.

    ``phi = exp(-sqrt(2 alpha) w^2)`` and ``C = phi(a)``, so the trial
    function vanishes at both ends.  Returns ``(quotient, quotient - sqrt(2 alpha))``.
    The excess is integrated directly rather than by subtraction: as ``phi``
    solves the whole-line eigen-equation, integrating by parts leaves
    ``int (phi - C) C (sqrt(2 alpha) - 4 alpha w^2) / int (phi - C)^2``.
    """
    k = math.sqrt(2 * alpha)
    a = float(half_width)
    C = math.exp(-k * a * a)

    def phi(w):
        return np.exp(-k * w * w)

    def num(w):
        p = phi(w)
        return 0.5 * (2 * k * w * p) ** 2 + 4 * alpha * w * w * (p - C) ** 2

    def den(w):
        return (phi(w) - C) ** 2

    def excess_num(w):
        # (h - k) applied to (phi - C), paired with (phi - C): only the C-terms survive
        p = phi(w)
        return (p - C) * C * (k - 4 * alpha * w * w)

    panels = max(1, int(math.ceil(a * math.sqrt(k))))
    n = gauss_legendre(num, 0.0, a, nodes=nodes, panels=panels)
    d = gauss_legendre(den, 0.0, a, nodes=nodes, panels=panels)
    e = gauss_legendre(excess_num, 0.0, a, nodes=nodes, panels=panels, abs_floor=1e-300)
    return n / d, e / d


def asymptotic_margin(L: float, M: float) -> float:
    """Large-``L`` margin ``2(M-1) pi^2 - (10/9) pi^2 / L^2 + (pi^2-6)/(6 pi^2 (L^2-1))``."""
    return 2 * (M - 1) * PI2 - 10 / 9 * PI2 / L ** 2 + Y_POT_COEFF / (L ** 2 - 1)


def variational_bound_bulge(L: float, M: float, nodes: int = 64) -> BindingWindowResult:
    """Rayleigh quotient of the product trial function supported in the bulge.

    The trial function is ``cos(4 pi u / 3L) (phi(w) - C) cos(pi y1/h) cos(pi y2/h)``
    on ``|u| < 3L/8``, ``|w| < L/8``, ``|y_i| < h/2``; its support lies in the
    cavity since ``|x_i| <= |u| + |w| < L/2``.
    """
    alpha, h = bulge_geometry(L, M)
    energy, _ = exact_oscillator(alpha)
    u_term = 8 * PI2 / (9 * L ** 2)
    y_kin = 2 * PI2 / h ** 2
    y_pot = Y_POT_COEFF * alpha * h ** 2
    w_term, w_excess = w_rayleigh_quotient(alpha, L / 8, nodes)
    value = u_term + y_kin + y_pot + w_term
    threshold = energy + 2 * PI2
    # subtract the large constants analytically: y_kin - 2 pi^2 = 2 pi^2 ((M - 1) - L^-2)
    margin = u_term + 2 * PI2 * ((M - 1) - alpha) + y_pot + w_excess
    return BindingWindowResult(
        L=L, M=M, h=h, alpha=alpha, value=value, threshold=threshold, margin=margin,
        u_term=u_term, y_kinetic=y_kin, y_potential=y_pot, w_term=w_term, w_excess=w_excess,
        asymptotic_margin=asymptotic_margin(L, M),
    )


def eqa_terms_by_quadrature(L: float, M: float, nodes: int = 64) -> dict:
    """The three closed-form pieces of the bound recomputed as explicit integrals of the trial function."""
    alpha, h = bulge_geometry(L, M)
    q = 4 * math.pi / (3 * L)
    a = 3 * L / 8
    u_num = gauss_legendre(lambda u: 0.5 * (q * np.sin(q * u)) ** 2, -a, a, nodes=nodes)
    u_den = gauss_legendre(lambda u: np.cos(q * u) ** 2, -a, a, nodes=nodes)
    k = math.pi / h
    b = h / 2
    c_den = gauss_legendre(lambda y: np.cos(k * y) ** 2, -b, b, nodes=nodes)
    c_kin = gauss_legendre(lambda y: (k * np.sin(k * y)) ** 2, -b, b, nodes=nodes)
    x, wts = np.polynomial.legendre.leggauss(4 * nodes)
    y = b * x
    wy = b * wts
    Y1, Y2 = np.meshgrid(y, y, indexing="ij")
    W = np.outer(wy, wy)
    g = np.cos(k * Y1) ** 2 * np.cos(k * Y2) ** 2
    pot = float(np.sum(W * alpha * (Y1 - Y2) ** 2 * g)) / float(np.sum(W * g))
    return {"u_term": u_num / u_den, "y_kinetic": 2 * c_kin / c_den, "y_potential": pot}


def dirichlet_w_ground(alpha: float, half_width: float, spacing: Optional[float] = None) -> float:
    """Ground energy of ``-1/2 d_ww + 4 alpha w^2`` on ``(-a, a)`` with Dirichlet ends."""
    a = float(half_width)
    s = spacing or a / 2000
    n = math.ceil(a / s)
    s = a / n
    lams = [fd_ground(alpha, a, t, "dirichlet")[0] for t in (s, s / 2)]
    return richardson_extrapolate(lams, (s, s / 2), 2).value


# ----------------------------------------------------------------- search


@dataclass(frozen=True)
class BindingSearch:
    c: float
    rows: tuple
    found: Optional[BindingWindowResult]
    best: BindingWindowResult

    @property
    def status(self) -> str:
        return "FOUND" if self.found is not None else "NOT_FOUND"


def m_rule(L: float, c: float) -> float:
    return 1 + c * L ** -2


def binding_window_search(L_values: Sequence[float], c: float = 0.25, nodes: int = 64) -> BindingSearch:
    """Evaluate the bound along ``M = 1 + c L^-2`` and return the smallest ``L`` with negative margin."""
    Ls = sorted(float(v) for v in L_values)
    if not Ls:
        raise ValueError("empty L range")
    if Ls[0] < 5 or Ls[-1] > 1000:
        raise ValueError("L values must lie in [5, 1000]")
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1) so that h > 1")
    rows = []
    for L in Ls:
        r = variational_bound_bulge(L, m_rule(L, c), nodes)
        if not (r.h > 1 and r.M > 1):
            raise AssertionError(f"infeasible point L={L}")
        rows.append(r)
    found = next((r for r in rows if r.margin < 0), None)
    best = min(rows, key=lambda r: r.margin)
    return BindingSearch(c=c, rows=tuple(rows), found=found, best=best)


def geometric_L_grid(lo: float, hi: float, count: int) -> list:
    return [float(v) for v in np.geomspace(lo, hi, count)]


def smallest_binding_integer_L(lo: int, hi: int, c: float = 0.25, nodes: int = 64) -> Optional[int]:
    """Smallest integer ``L`` in ``[lo, hi]`` with negative margin, by bisection on the sign change.

    Assumes a single sign change, which holds along ``M = 1 + c L^-2``: the
    positive remainder decays exponentially while the gain decays like ``L^-2``.
    """
    def neg(L):
        return variational_bound_bulge(float(L), m_rule(L, c), nodes).margin < 0

    if not neg(hi):
        return None
    if neg(lo):
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if neg(mid):
            hi = mid
        else:
            lo = mid
    return hi
