"""One particle in the bulge waveguide: ground energy, window-cavity bound and certificate.

Cutting the two windows with Neumann conditions splits the waveguide into
the two arms, whose spectrum starts at ``pi^2``, and the cavity with Neumann
windows, whose lowest eigenvalue ``lambda(eps)`` is computed here.  By
bracketing the ground energy of the waveguide is at least
``min(pi^2, lambda(eps))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .domain_grid import (BC, WaveguideParams, aligned_spacing, assemble_operator, build_waveguide,
                          build_window_rectangle, discretize)
from .eigensolve import ExtrapolationReport, lowest_eigenpairs, richardson_extrapolate
from .reports import BoundReport, Direction

PI2 = math.pi ** 2


@dataclass(frozen=True)
class Numerics:
    """Grid ladder and solver settings.

    ``spacing`` is the coarsest spacing (reduced to the nearest aligned value);
    ``levels`` halvings follow.  ``truncation`` is the starting arm length for
    the doubling study, capped at ``max_truncation``.
    """

    spacing: float = 1 / 40
    levels: int = 3
    truncation: float = 2.0
    max_truncation: float = 16.0
    trunc_tol: float = 1e-8
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        if self.levels < 2:
            raise ValueError("need at least two levels for extrapolation")
        if not 0 < self.truncation <= self.max_truncation:
            raise ValueError("truncation must lie in (0, max_truncation]")

    def ladder(self, coarse: float) -> list:
        return [coarse / 2 ** k for k in range(self.levels)]


class SignalBelowNoise(RuntimeError):
    def __init__(self, message, smallest_usable=None):
        super().__init__(message)
        self.smallest_usable = smallest_usable


def _cavity_shift(s: float, h: float) -> float:
    # removing every x-coupling leaves independent Dirichlet columns of height h
    return (2 / s ** 2) * (1 - math.cos(math.pi * s / h)) * (1 - 1e-12)


# ----------------------------------------------------------------- full waveguide


@dataclass(frozen=True)
class WaveguideState:
    value: float
    grid: object
    vector: np.ndarray = field(repr=False)


def waveguide_ground_state(params: WaveguideParams, truncation: float, spacing: float, *,
                           quarter: bool = True, straight: bool = False, tol: float = 1e-8,
                           seed: int = 0) -> WaveguideState:
    dom = build_waveguide(params, truncation, BC.DIRICHLET, quarter=quarter, straight=straight)
    grid = discretize(dom, spacing)
    op = assemble_operator(dom, grid, potential_id="zero")
    height = 1.0 if straight else max(params.h, 1.0)
    res = lowest_eigenpairs(op, 1, tol=tol, seed=seed, shift=_cavity_shift(spacing, height))
    return WaveguideState(res.ground, grid, res.eigenvectors[:, 0])


def _aligned_truncation(X: float, s: float) -> float:
    return max(1, round(X / s)) * s


def ground_energy_H1(params: WaveguideParams, numerics: Numerics = Numerics(), *,
                     straight: bool = False) -> BoundReport:
    """Extrapolated ground energy of the Dirichlet-truncated waveguide, against ``pi^2``.

    The arm length is doubled on the coarsest grid until the energy moves by
    less than ``numerics.trunc_tol``; an unconverged study is recorded in
    ``notes['truncation_converged']`` and the status.  Extrapolation assumes
    first order when the windows are open (the window edges are corner
    singularities) and second order for the plain strip.
    """
    probe = build_waveguide(params, numerics.max_truncation, quarter=True, straight=straight)
    s0 = aligned_spacing(probe, numerics.spacing)
    # arms must be longer than half the cavity
    X = _aligned_truncation(max(numerics.truncation, params.L / 2 + s0), s0)
    study = []
    while True:
        study.append((X, waveguide_ground_state(params, X, s0, straight=straight,
                                                tol=numerics.tol, seed=numerics.seed).value))
        if len(study) > 1 and abs(study[-1][1] - study[-2][1]) < numerics.trunc_tol:
            X = study[-2][0]
            converged = True
            break
        if 2 * X > max(numerics.max_truncation, study[0][0]) + 1e-12:
            converged = False
            break
        X *= 2
    spacings = numerics.ladder(s0)
    vals = [study[[x for x, _ in study].index(X)][1]]
    vals += [waveguide_ground_state(params, X, s, straight=straight, tol=numerics.tol,
                                    seed=numerics.seed).value for s in spacings[1:]]
    order = 2 if straight else 1
    rep = richardson_extrapolate(vals, spacings, order)
    status = "BINDS" if rep.value < PI2 - 10 * (rep.error + numerics.tol) else "NO_BINDING"
    if not converged:
        status += ";TRUNCATION_UNCONVERGED"
    return BoundReport(
        name="ground_energy_H1", value=rep.value, direction=Direction.UPPER_BOUND, threshold=PI2,
        error=rep.error + numerics.tol, status=status,
        notes={"truncation": X, "truncation_converged": converged, "truncation_study": tuple(study),
               "spacings": tuple(spacings), "raw": tuple(vals), "observed_order": rep.observed_order,
               "assumed_order": order, "resid_tol": numerics.tol},
    )


def symmetry_residuals(state: WaveguideState) -> tuple:
    """Relative odd parts of a full-domain eigenvector under ``x -> -x`` and ``y -> -y``."""
    a = state.grid.to_array(state.vector, fill=0.0)
    nrm = np.linalg.norm(a)
    return (float(np.linalg.norm(a - a[::-1, :]) / (2 * nrm)),
            float(np.linalg.norm(a - a[:, ::-1]) / (2 * nrm)))


# ----------------------------------------------------------------- window cavity


def lambda0_exact(L: float, h: float) -> float:
    return PI2 * (h ** -2 + L ** -2)


def _rect_ground(params, spacing, tol, seed):
    dom = build_window_rectangle(params, window_bc=BC.NEUMANN, quarter=True, normalize_y=True)
    grid = discretize(dom, spacing)
    op = assemble_operator(dom, grid, potential_id="zero")
    shift = (2 / spacing ** 2) * (1 - math.cos(math.pi * spacing)) / params.h ** 2 * (1 - 1e-12)
    return lowest_eigenpairs(op, 1, tol=tol, seed=seed, shift=shift).ground


def common_spacing(params_list: Sequence[WaveguideParams], max_spacing: float) -> float:
    """Largest spacing at most ``max_spacing`` aligned with every window cavity in the list."""
    s = max_spacing
    for _ in range(3):
        for p in params_list:
            s = aligned_spacing(build_window_rectangle(p, quarter=True), s)
    return s


def default_window_spacing(params: WaveguideParams, max_spacing: float) -> float:
    """At least two cells across the half window on the coarsest grid."""
    cap = max_spacing
    if params.epsilon > 0:
        cap = min(cap, params.epsilon / (2 * params.h) / 2)
    return common_spacing([params], cap)


@dataclass(frozen=True)
class WindowShift:
    """``delta = lambda(0) - lambda(eps)`` extrapolated at first order."""

    epsilon: float
    delta: float
    error: float
    extrapolation: ExtrapolationReport


def window_shift(params: WaveguideParams, spacings: Sequence[float], tol: float = 1e-8,
                 seed: int = 0) -> WindowShift:
    """Same-grid differences ``lambda_s(0) - lambda_s(eps)``.

    Differencing on identical grids cancels the bulk discretisation error;
    what remains is first order from the window edges.
    """
    closed = replace(params, epsilon=0.0)
    diffs = [_rect_ground(closed, s, tol, seed) - _rect_ground(params, s, tol, seed) for s in spacings]
    rep = richardson_extrapolate(diffs, spacings, 1)
    return WindowShift(params.epsilon, rep.value, rep.error, rep)


def window_rectangle_eigenvalue(params: WaveguideParams, numerics: Numerics = Numerics(),
                                spacing: Optional[float] = None) -> BoundReport:
    """``lambda(eps)`` of the cavity with Neumann windows, and the analytic ``lambda(0)``."""
    lam0 = lambda0_exact(params.L, params.h)
    s0 = spacing if spacing is not None else default_window_spacing(params, numerics.spacing)
    spacings = numerics.ladder(s0)
    notes = {"lambda0": lam0, "spacings": tuple(spacings), "resid_tol": numerics.tol}
    if params.epsilon == 0:
        vals = [_rect_ground(params, s, numerics.tol, numerics.seed) for s in spacings]
        rep = richardson_extrapolate(vals, spacings, 2)
        value, err = rep.value, rep.error
        notes.update(raw=tuple(vals), observed_order=rep.observed_order)
    else:
        ws = window_shift(params, spacings, numerics.tol, numerics.seed)
        value, err = lam0 - ws.delta, ws.error
        notes.update(delta=ws.delta, raw=ws.extrapolation.values,
                     observed_order=ws.extrapolation.observed_order)
    return BoundReport("window_rectangle", value, Direction.ESTIMATE, PI2, error=err + numerics.tol,
                       status="ABOVE" if value > PI2 else "BELOW", notes=notes)


# ----------------------------------------------------------------- scaling and certificate


@dataclass(frozen=True)
class GadylshinFit:
    slope: float
    intercept: float
    epsilons: tuple
    deltas: tuple
    errors: tuple
    spacings: tuple


def gadylshin_exponent(params: WaveguideParams, eps_list: Sequence[float],
                       numerics: Numerics = Numerics()) -> GadylshinFit:
    """Least-squares slope of ``log(lambda(0) - lambda(eps))`` against ``log eps``."""
    eps = sorted((float(e) for e in eps_list), reverse=True)
    if len(eps) < 2:
        raise ValueError("need at least two epsilon values to fit an exponent")
    for a, b in zip(eps, eps[1:]):
        if b > 0.5 * a * (1 + 1e-12):
            raise ValueError(f"epsilon list must shrink by a factor of at least 2, got {a} -> {b}")
    plist = [replace(params, epsilon=e) for e in eps]
    s0 = common_spacing(plist, min(numerics.spacing, eps[-1] / (2 * params.h) / 2))
    spacings = numerics.ladder(s0)
    shifts = [window_shift(p, spacings, numerics.tol, numerics.seed) for p in plist]
    ok = [w.delta > 10 * (w.error + numerics.tol) for w in shifts]
    if not all(ok):
        usable = [w.epsilon for w, good in zip(shifts, ok) if good]
        smallest = min(usable) if usable else None
        raise SignalBelowNoise(
            f"window shift within the numerical error for some epsilon; smallest usable epsilon {smallest}",
            smallest)
    x = np.log([w.epsilon for w in shifts])
    y = np.log([w.delta for w in shifts])
    slope, intercept = np.polyfit(x, y, 1)
    return GadylshinFit(float(slope), float(intercept), tuple(eps), tuple(w.delta for w in shifts),
                        tuple(w.error for w in shifts), tuple(spacings))


def one_particle_unbound_certificate(params: WaveguideParams, numerics: Numerics = Numerics(),
                                     spacing: Optional[float] = None) -> BoundReport:
    """Lower bound ``min(pi^2, lambda(eps))`` on the waveguide spectrum.

    PASS needs ``lambda(eps) > pi^2 + budget`` with budget ten times the
    extrapolation error plus residual tolerance; FAIL means ``lambda(eps)``
    lies below ``pi^2 - budget``; anything between is INCONCLUSIVE.
    """
    params.check_waveguide_regime()
    lam = window_rectangle_eigenvalue(params, numerics, spacing)
    budget = 10 * lam.error
    if lam.value > PI2 + budget:
        status = "PASS"
    elif lam.value < PI2 - budget:
        status = "FAIL"
    else:
        status = "INCONCLUSIVE"
    notes = dict(lam.notes, lambda_eps=lam.value, budget=budget, extrap_err=lam.error - numerics.tol)
    return BoundReport("one_particle_certificate", min(PI2, lam.value), Direction.LOWER_BOUND, PI2,
                       error=budget, status=status, notes=notes)


@dataclass(frozen=True)
class EpsilonThreshold:
    epsilon: Optional[float]
    next_epsilon: Optional[float]
    spacing: float
    evaluated: dict


def certificate_epsilon_threshold(L: float, h: float, numerics: Numerics = Numerics(),
                                  eps_max: float = 0.9) -> EpsilonThreshold:
    """Largest window ``eps`` on an aligned lattice for which the certificate passes.

    Windows are restricted to ``eps = 2 h k s`` with ``s`` the coarsest aligned
    spacing, and the integer ``k`` is bisected using that ``lambda(eps)`` does
    not increase with ``eps``.
    """
    s = common_spacing([WaveguideParams(L, h, 0.0)], numerics.spacing / 2)
    kmax = int(min(eps_max, 0.999) / (2 * h * s))
    evaluated = {}

    def passes(k):
        e = 2 * h * k * s
        if k not in evaluated:
            evaluated[k] = one_particle_unbound_certificate(WaveguideParams(L, h, e), numerics, s).status
        return evaluated[k] == "PASS"

    if kmax < 1 or not passes(1):
        return EpsilonThreshold(None, 2 * h * s, s, {2 * h * k * s: v for k, v in evaluated.items()})
    if passes(kmax):
        return EpsilonThreshold(2 * h * kmax * s, None, s, {2 * h * k * s: v for k, v in evaluated.items()})
    lo, hi = 1, kmax
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return EpsilonThreshold(2 * h * lo * s, 2 * h * hi * s, s,
                            {2 * h * k * s: v for k, v in sorted(evaluated.items())})
