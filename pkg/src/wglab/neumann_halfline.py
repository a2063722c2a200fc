"""Two particles on a half-line with Neumann ends and a harmonic attraction.

The operator ``-d_11 - d_22 + alpha (x1 - x2)^2`` on the quarter plane
``x1, x2 > 0`` with Neumann axes has essential spectrum starting at
``sqrt(2 alpha)``.  A trial function ``phi(w) exp(-eps u)`` in centre-of-mass
variables shows a bound state below it; a direct finite-difference solve
on a truncated square confirms the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from .domain_grid import BC, assemble_operator, build_quarter_plane, discretize
from .eigensolve import lowest_eigenpairs, richardson_extrapolate
from .oscillator1d import exact_oscillator
from .quadrature import QuadratureError
from .reports import BoundReport, Direction


class BindingNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class HalflineBoundResult:
    alpha: float
    epsilon: float
    bound: float
    boundary_integral: float
    threshold: float
    direct_upper: Optional[float] = None
    direct_lower: Optional[float] = None
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def margin(self) -> float:
        return self.bound - self.threshold


def boundary_integral(alpha: float, epsilon: float) -> float:
    """``int_0^inf phi phi' exp(-2 eps u) du`` for the normalised whole-line ground state."""
    _, c = exact_oscillator(alpha)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    pref = -c * math.sqrt(c / math.pi)

    def f(u):
        return u * math.exp(-c * u * u - 2 * epsilon * u)

    val, err = integrate.quad(f, 0, math.inf, epsabs=0, epsrel=1e-13, limit=200)
    if err > 1e-10 * max(abs(val), 1e-300):
        raise QuadratureError(f"boundary integral did not converge (err {err:.2e})")
    return pref * val


def halfline_variational_bound(alpha: float, epsilon: float) -> HalflineBoundResult:
    """``sqrt(2 alpha) + eps (eps/2 + 2 I(eps))`` for the trial function ``phi(w) exp(-eps u)``."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive (trial function not normalisable), got {epsilon}")
    energy, _ = exact_oscillator(alpha)
    integral = boundary_integral(alpha, epsilon)
    return HalflineBoundResult(alpha, epsilon, energy + epsilon * (0.5 * epsilon + 2 * integral),
                               integral, energy)


def optimize_halfline_epsilon(alpha: float, interval: Optional[Sequence[float]] = None,
                              scan_points: int = 64) -> HalflineBoundResult:
    """Minimise the trial bound over ``eps``: log-grid scan, then golden section."""
    energy, _ = exact_oscillator(alpha)
    cap = 10 * (2 * alpha) ** 0.25
    lo, hi = interval if interval is not None else (1e-4 * cap, cap)
    if not 0 < lo < hi <= cap:
        raise ValueError(f"interval must lie in (0, {cap}]")
    grid = np.geomspace(lo, hi, scan_points)

    def bound(e):
        return halfline_variational_bound(alpha, float(e)).bound

    vals = np.array([bound(e) for e in grid])
    i = int(np.argmin(vals))
    if 0 < i < grid.size - 1:
        res = optimize.minimize_scalar(bound, bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                       method="golden", tol=1e-10)
        eps_star = float(res.x)
    else:
        eps_star = float(grid[i])
    best = halfline_variational_bound(alpha, eps_star)
    if not best.bound < energy:
        raise BindingNotFound(f"trial bound {best.bound} never drops below {energy} on [{lo}, {hi}]")
    return best


# ----------------------------------------------------------------- direct solve


@dataclass(frozen=True)
class WedgeResult:
    report: BoundReport
    extrapolation: object
    exchange_asymmetry: float
    truncation_bc: BC
    extent: float


def exchange_asymmetry(grid, vec: np.ndarray) -> float:
    """Relative size of the part of ``vec`` odd under ``x1 <-> x2``."""
    a = grid.to_array(vec, fill=0.0)
    return float(np.linalg.norm(a - a.T) / (2 * np.linalg.norm(a)))


def _wedge_level(alpha, extent, spacing, truncation_bc, tol, seed):
    dom = build_quarter_plane(extent, truncation_bc)
    grid = discretize(dom, spacing)
    op = assemble_operator(dom, grid, lambda x1, x2: alpha * (x1 - x2) ** 2,
                           potential_id=f"harmonic_diff:{alpha!r}")
    # the Neumann-sector kinetic bottom is zero, so zero potential lower-bounds everything
    res = lowest_eigenpairs(op, 1, tol=tol, seed=seed, shift=-1e-3)
    return res.ground, exchange_asymmetry(grid, res.eigenvectors[:, 0])


def wedge_ground_energy(alpha: float, extent: float, spacing: float,
                        truncation_bc: BC = BC.DIRICHLET, levels: int = 3,
                        tol: float = 1e-7, seed: int = 0) -> WedgeResult:
    """Extrapolated ground energy on ``[0, X]^2`` at ``spacing / 2**k``, ``k < levels``.

    DIRICHLET far faces give an upper-biased value, NEUMANN a lower-biased one.
    """
    energy, _ = exact_oscillator(alpha)
    spacings = [spacing / 2 ** k for k in range(levels)]
    vals, asym = [], 0.0
    for s in spacings:
        v, asym = _wedge_level(alpha, extent, s, truncation_bc, tol, seed)
        vals.append(v)
    if levels >= 2:
        rep = richardson_extrapolate(vals, spacings, 2)
        value, err = rep.value, rep.error
    else:
        rep, value, err = None, vals[0], float("nan")
    direction = Direction.UPPER_BOUND if truncation_bc is BC.DIRICHLET else Direction.LOWER_BOUND
    report = BoundReport(
        name="wedge_ground", value=value, direction=direction, threshold=energy, error=err,
        status="BINDS" if value < energy else "NO_BINDING",
        notes={"extent": extent, "spacings": tuple(spacings), "raw": tuple(vals),
               "truncation_bc": truncation_bc.value, "resid_tol": tol},
    )
    return WedgeResult(report, rep, asym, truncation_bc, extent)


@dataclass(frozen=True)
class TruncationStudy:
    extents: tuple
    values: tuple
    converged: bool
    extent: float
    spacing: float

    @property
    def change(self) -> float:
        return abs(self.values[-1] - self.values[-2]) if len(self.values) > 1 else math.inf


def truncation_study(alpha: float, spacing: float, start: float = 4.0, max_extent: float = 32.0,
                     tol: float = 1e-8, truncation_bc: BC = BC.DIRICHLET,
                     resid_tol: float = 1e-9, seed: int = 0) -> TruncationStudy:
    """Double ``X`` from ``start`` until the single-grid energy moves by less than ``tol``."""
    X = float(start)
    extents, values = [], []
    while X <= max_extent + 1e-12:
        values.append(_wedge_level(alpha, X, spacing, truncation_bc, resid_tol, seed)[0])
        extents.append(X)
        if len(values) > 1 and abs(values[-1] - values[-2]) < tol:
            return TruncationStudy(tuple(extents), tuple(values), True, extents[-2], spacing)
        X *= 2
    return TruncationStudy(tuple(extents), tuple(values), False, extents[-1], spacing)


@dataclass(frozen=True)
class NeumannStudy:
    alpha: float
    variational: HalflineBoundResult
    truncation: TruncationStudy
    dirichlet: WedgeResult
    neumann: WedgeResult
    budget: float

    @property
    def threshold(self) -> float:
        return self.variational.threshold


def neumann_study(alpha: float = 1.0, extent: float = 8.0, spacing: float = 1 / 32, levels: int = 3,
                  neumann_levels: int = 2, coarse_spacing: float = 1 / 8, tol: float = 1e-7,
                  seed: int = 0) -> NeumannStudy:
    """Trial bound, truncation doubling, and direct Dirichlet/Neumann solves on ``[0, extent]^2``.

    The doubling study runs on the coarse grid; the numerical budget of the
    fine Dirichlet value adds the coarse-grid distance between ``extent`` and
    the doubling-rule extent to the Richardson error and residual tolerance.
    """
    var = optimize_halfline_epsilon(alpha)
    trunc = truncation_study(alpha, coarse_spacing, start=extent / 2, seed=seed)
    d = wedge_ground_energy(alpha, extent, spacing, BC.DIRICHLET, levels, tol, seed)
    n = wedge_ground_energy(alpha, extent, spacing, BC.NEUMANN, neumann_levels, tol, seed)
    i = trunc.extents.index(extent) if extent in trunc.extents else None
    j = trunc.extents.index(trunc.extent)
    trunc_gap = abs(trunc.values[i] - trunc.values[j]) if i is not None else trunc.change
    budget = d.report.error + trunc_gap + tol
    return NeumannStudy(alpha, var, trunc, d, n, budget)
