"""``wglab`` command line: scenario runners, sweeps and convergence studies.

Every run writes ``<out>/<scenario>.csv`` (and ``.svg`` with ``--plot``).
Exit codes: 0 success, 1 bad configuration, 2 solver non-convergence,
3 inconclusive certificate, 4 search found nothing.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import svg
from .config import SCENARIOS, ConfigError, RunConfig, load_config
from .domain_grid import (BC, DomainError, WaveguideParams, assemble_operator, build_rectangle,
                          discretize)
from .eigensolve import EigensolverError, lowest_eigenpairs, richardson_extrapolate
from .neumann_halfline import halfline_variational_bound, neumann_study, optimize_halfline_epsilon
from .one_particle import (PI2, Numerics, SignalBelowNoise, default_window_spacing,
                           gadylshin_exponent, lambda0_exact, one_particle_unbound_certificate,
                           window_rectangle_eigenvalue)
from .oscillator1d import exact_oscillator, solve_truncated_oscillator
from .two_particle import (binding_window_search, bulge_geometry, essential_threshold_lower_bound,
                           geometric_L_grid, m_rule, smallest_binding_integer_L,
                           transversal_y_eigenvalue, variational_bound_bulge)

log = logging.getLogger("wglab")

HEADER = ("scenario,param_names,param_values,value,threshold,margin,direction,status,"
          "spacing_finest,truncation,resid_tol,extrap_err,seed")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_INCONCLUSIVE, EXIT_NOT_FOUND = range(5)


@dataclass(frozen=True)
class Row:
    scenario: str
    params: tuple  # ((name, value), ...)
    value: float
    threshold: float
    direction: str
    status: str
    spacing_finest: Optional[float] = None
    truncation: Optional[float] = None
    resid_tol: Optional[float] = None
    extrap_err: Optional[float] = None
    seed: int = 0

    @property
    def margin(self) -> float:
        return self.value - self.threshold

    def fields(self) -> list:
        return [self.scenario, ";".join(k for k, _ in self.params),
                ";".join(_num(v) for _, v in self.params), _num(self.value), _num(self.threshold),
                _num(self.margin), self.direction, self.status, _num(self.spacing_finest),
                _num(self.truncation), _num(self.resid_tol), _num(self.extrap_err), str(self.seed)]


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def render_csv(rows: list) -> str:
    buf = io.StringIO()
    buf.write(HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for r in rows:
        writer.writerow(r.fields())
    return buf.getvalue()


@dataclass
class Outcome:
    rows: list
    code: int = EXIT_OK
    figure: Optional[str] = None


def _numerics(cfg: RunConfig, spacing: float) -> Numerics:
    return Numerics(spacing=cfg.spacing or spacing, levels=cfg.levels, truncation=cfg.truncation,
                    max_truncation=cfg.max_truncation, tol=cfg.tol, seed=cfg.seed)


def _params(cfg: RunConfig, **kw) -> WaveguideParams:
    try:
        return WaveguideParams(kw.get("L", cfg.L), kw.get("h", cfg.h), kw.get("eps", cfg.eps), cfg.alpha)
    except DomainError as exc:
        raise ConfigError(f"invalid waveguide parameters: {exc}") from None


# ----------------------------------------------------------------- scenarios


def run_lemma1(cfg: RunConfig) -> Outcome:
    p = _params(cfg)
    try:
        p.check_waveguide_regime()
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    num = _numerics(cfg, 1 / 64)
    cert = one_particle_unbound_certificate(p, num)
    n = cert.notes
    base = dict(spacing_finest=n["spacings"][-1], resid_tol=cfg.tol, extrap_err=n["extrap_err"], seed=cfg.seed)
    pp = (("L", p.L), ("h", p.h), ("eps", p.epsilon))
    rows = [
        Row("lemma1:lambda_eps", pp + (("lambda0", n["lambda0"]),), n["lambda_eps"], PI2, "ESTIMATE",
            cert.status, **base),
        Row("lemma1:certificate", pp + (("budget", n["budget"]),), cert.value, PI2, "LOWER_BOUND",
            cert.status, **base),
    ]
    figure = None
    if cfg.scaling:
        try:
            fit = gadylshin_exponent(p, cfg.eps_list, num)
        except SignalBelowNoise as exc:
            rows.append(Row("lemma1:scaling", (("L", p.L), ("h", p.h)), math.nan, 2.0, "ESTIMATE",
                            f"SIGNAL_BELOW_NOISE(smallest_usable={exc.smallest_usable})", seed=cfg.seed))
        else:
            for e, d, err in zip(fit.epsilons, fit.deltas, fit.errors):
                rows.append(Row("lemma1:window_shift", (("L", p.L), ("h", p.h), ("eps", e)), d, 0.0,
                                "ESTIMATE", "OK", spacing_finest=fit.spacings[-1], resid_tol=cfg.tol,
                                extrap_err=err, seed=cfg.seed))
            rows.append(Row("lemma1:scaling", (("L", p.L), ("h", p.h), ("eps_max", fit.epsilons[0]),
                                               ("eps_min", fit.epsilons[-1])),
                            fit.slope, 2.0, "ESTIMATE", "OK", spacing_finest=fit.spacings[-1],
                            resid_tol=cfg.tol, extrap_err=max(fit.errors), seed=cfg.seed))
            figure = svg.line_plot(fit.epsilons, {"lambda(0) - lambda(eps)": fit.deltas,
                                                  "eps^2 reference": [math.exp(fit.intercept) * e ** 2
                                                                      for e in fit.epsilons]},
                                   xlabel="window eps", ylabel="eigenvalue shift",
                                   title=f"Window shift, fitted exponent {fit.slope:.3f}", logx=True, logy=True)
    code = EXIT_INCONCLUSIVE if cert.status == "INCONCLUSIVE" else EXIT_OK
    return Outcome(rows, code, figure)


def run_lemma2a(cfg: RunConfig) -> Outcome:
    rows = []
    energy, _ = exact_oscillator(cfg.alpha)
    for b in cfg.betas:
        r = essential_threshold_lower_bound(cfg.alpha, b)
        rows.append(Row("lemma2a:threshold_bound",
                        (("alpha", cfg.alpha), ("beta", b), ("lambda_beta", r.notes["lambda_beta"])),
                        r.value, r.threshold, "LOWER_BOUND", r.notes["branch"],
                        spacing_finest=r.notes["spacing"], resid_tol=0.0, extrap_err=r.error, seed=cfg.seed))
    d = essential_threshold_lower_bound(cfg.alpha)
    rows.append(Row("lemma2a:default_beta",
                    (("alpha", cfg.alpha), ("beta", d.notes["beta"]), ("deficit", d.notes["deficit"])),
                    d.value, d.threshold, "LOWER_BOUND", d.notes["branch"], spacing_finest=d.notes["spacing"],
                    resid_tol=0.0, extrap_err=d.error, seed=cfg.seed))
    s0 = cfg.spacing or 1 / 32
    mu, rep = transversal_y_eigenvalue(cfg.alpha, s0, cfg.levels, tol=cfg.tol)
    rows.append(Row("lemma2a:transversal", (("alpha", cfg.alpha),), mu, 2 * PI2, "ESTIMATE",
                    "OK" if mu >= 2 * PI2 - rep.error else "BELOW_DIRICHLET_SQUARE",
                    spacing_finest=rep.spacings[-1], resid_tol=cfg.tol, extrap_err=rep.error, seed=cfg.seed))
    vals = [r.value for r in rows[:len(cfg.betas)]]
    fig = svg.line_plot(list(cfg.betas), {"threshold lower bound": vals}, xlabel="beta",
                        ylabel="lower bound", title="Essential threshold lower bound",
                        hline=energy + 2 * PI2)
    return Outcome(rows, EXIT_OK, fig)


def run_lemma2b(cfg: RunConfig) -> Outcome:
    Ls = geometric_L_grid(cfg.L_min, cfg.L_max, cfg.L_count)
    try:
        search = binding_window_search(Ls, cfg.c)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = [Row("lemma2b:bound", (("L", r.L), ("M", r.M), ("h", r.h), ("alpha", r.alpha)),
                r.threshold + r.margin, r.threshold, "UPPER_BOUND", "BINDS" if r.margin < 0 else "NO_BINDING",
                extrap_err=1e-12 * r.value, seed=cfg.seed) for r in search.rows]
    L_star = smallest_binding_integer_L(math.ceil(cfg.L_min), math.floor(cfg.L_max), cfg.c)
    if L_star is None:
        b = search.best
        rows.append(Row("lemma2b:L_star", (("L", b.L), ("M", b.M), ("h", b.h)), b.threshold + b.margin,
                        b.threshold, "UPPER_BOUND", "NOT_FOUND", extrap_err=1e-12 * b.value, seed=cfg.seed))
        code = EXIT_NOT_FOUND
    else:
        r = variational_bound_bulge(float(L_star), m_rule(L_star, cfg.c))
        rows.append(Row("lemma2b:L_star",
                        (("L", r.L), ("M", r.M), ("h", r.h), ("asymptotic_margin", r.asymptotic_margin),
                         ("w_excess", r.w_excess)),
                        r.threshold + r.margin, r.threshold, "UPPER_BOUND", "FOUND",
                        extrap_err=1e-12 * r.value, seed=cfg.seed))
        code = EXIT_OK
    fig = svg.line_plot([r.L for r in search.rows],
                        {"margin": [r.margin for r in search.rows],
                         "large-L prediction": [r.asymptotic_margin for r in search.rows]},
                        xlabel="L", ylabel="bound - threshold", title=f"Binding margin, M = 1 + {cfg.c}/L^2",
                        logx=True, hline=0.0)
    return Outcome(rows, code, fig)


def run_neumann(cfg: RunConfig) -> Outcome:
    st = neumann_study(cfg.alpha, cfg.extent, cfg.spacing or 1 / 32, cfg.levels, tol=max(cfg.tol, 1e-7),
                       seed=cfg.seed)
    v = st.variational
    d, n = st.dirichlet.report, st.neumann.report
    tr = st.truncation
    resid = d.notes["resid_tol"]
    rows = [
        Row("neumann:variational", (("alpha", cfg.alpha), ("epsilon", v.epsilon),
                                    ("boundary_integral", v.boundary_integral)),
            v.bound, v.threshold, "UPPER_BOUND", "BINDS" if v.bound < v.threshold else "NO_BINDING",
            resid_tol=0.0, extrap_err=0.0, seed=cfg.seed),
        Row("neumann:wedge_dirichlet", (("alpha", cfg.alpha), ("exchange_asymmetry",
                                                               st.dirichlet.exchange_asymmetry)),
            d.value, d.threshold, "UPPER_BOUND", d.status, spacing_finest=d.notes["spacings"][-1],
            truncation=cfg.extent, resid_tol=resid, extrap_err=st.budget, seed=cfg.seed),
        Row("neumann:wedge_neumann", (("alpha", cfg.alpha),), n.value, n.threshold, "LOWER_BOUND", n.status,
            spacing_finest=n.notes["spacings"][-1], truncation=cfg.extent, resid_tol=resid,
            extrap_err=n.error, seed=cfg.seed),
        Row("neumann:truncation", (("alpha", cfg.alpha), ("extent_selected", tr.extent),
                                   ("change", tr.change)),
            tr.values[tr.extents.index(tr.extent)], v.threshold, "UPPER_BOUND",
            "CONVERGED" if tr.converged else "UNCONVERGED", spacing_finest=tr.spacing, truncation=tr.extent,
            resid_tol=1e-9, extrap_err=tr.change, seed=cfg.seed),
    ]
    cap = 10 * (2 * cfg.alpha) ** 0.25
    es = [cap * 10 ** (k / 8 - 4) for k in range(33)]
    fig = svg.line_plot(es, {"trial bound": [halfline_variational_bound(cfg.alpha, e).bound for e in es]},
                        xlabel="decay rate eps", ylabel="Rayleigh quotient",
                        title="Half-line trial bound against sqrt(2 alpha)", logx=True, hline=v.threshold)
    return Outcome(rows, EXIT_OK, fig)


def run_combined(cfg: RunConfig) -> Outcome:
    """Pick the cavity length with the most negative two-particle margin, then open
    the windows as wide as the one-particle certificate allows."""
    Ls = list(range(max(5, math.ceil(cfg.L_min)), math.floor(cfg.L_max) + 1))
    if not Ls:
        raise ConfigError("field 'L_min': empty integer L range")
    best = min((variational_bound_bulge(float(L), m_rule(L, cfg.c)) for L in Ls), key=lambda r: r.margin)
    if not best.margin < 0:
        row = Row("combined", (("L", best.L), ("M", best.M), ("h", best.h)), best.value, best.threshold,
                  "UPPER_BOUND", "NOT_FOUND", seed=cfg.seed)
        return Outcome([row], EXIT_NOT_FOUND)
    statuses = []
    for ep in sorted(cfg.eps_primes, reverse=True):
        eps = best.h * ep
        if not 0 < eps < 1:
            continue
        p = WaveguideParams(best.L, best.h, eps, best.alpha)
        num = _numerics(cfg, 1 / 16)
        cert = one_particle_unbound_certificate(p, num, default_window_spacing(p, num.spacing))
        statuses.append(cert.status)
        if cert.status == "PASS":
            n = cert.notes
            row = Row("combined",
                      (("L", best.L), ("M", best.M), ("h", best.h), ("eps", eps), ("eps_prime", ep),
                       ("alpha", best.alpha), ("lambda_eps", n["lambda_eps"]),
                       ("cert_margin", n["lambda_eps"] - PI2), ("cert_budget", n["budget"])),
                      best.threshold + best.margin, best.threshold, "UPPER_BOUND", "PASS;BINDS",
                      spacing_finest=n["spacings"][-1], resid_tol=cfg.tol, extrap_err=n["extrap_err"],
                      seed=cfg.seed)
            return Outcome([row], EXIT_OK)
    status = "INCONCLUSIVE" if "INCONCLUSIVE" in statuses else "NOT_FOUND"
    row = Row("combined", (("L", best.L), ("M", best.M), ("h", best.h)), best.threshold + best.margin,
              best.threshold, "UPPER_BOUND", f"{status};BINDS", seed=cfg.seed)
    return Outcome([row], EXIT_INCONCLUSIVE if status == "INCONCLUSIVE" else EXIT_NOT_FOUND)


def run_convergence(cfg: RunConfig) -> Outcome:
    rows = []
    if cfg.study == "rectangle":
        exact = lambda0_exact(cfg.L, cfg.h)
        dom = build_rectangle((-cfg.L / 2, cfg.L / 2), (-cfg.h / 2, cfg.h / 2), BC.DIRICHLET)
        spacings = cfg.ladder(cfg.spacing or 1 / 64)
        vals = []
        for s in spacings:
            grid = discretize(dom, s)
            op = assemble_operator(dom, grid, potential_id="zero")
            vals.append(lowest_eigenpairs(op, 1, tol=cfg.tol, seed=cfg.seed).ground)
        rep = richardson_extrapolate(vals, spacings, 2)
        label, trunc = "rectangle", None
    elif cfg.study == "oscillator":
        exact, _ = exact_oscillator(cfg.alpha)
        res = solve_truncated_oscillator(cfg.alpha, cfg.beta, cfg.spacing)
        s = 2 * res.spacing
        spacings, vals = [s, s / 2], list(res.raw)
        rep = richardson_extrapolate(vals, spacings, 2)
        label, trunc = "oscillator", cfg.beta
    elif cfg.study == "window":
        p = _params(cfg)
        exact = lambda0_exact(cfg.L, cfg.h)
        r = window_rectangle_eigenvalue(p, _numerics(cfg, 1 / 64))
        spacings = list(r.notes["spacings"])
        vals = list(r.notes["raw"])
        order = 2 if p.epsilon == 0 else 1
        rep = richardson_extrapolate(vals, spacings, order)
        label, trunc = "window_shift" if p.epsilon > 0 else "window_closed", None
        if p.epsilon > 0:
            exact = 0.0
    else:
        from .neumann_halfline import wedge_ground_energy
        exact, _ = exact_oscillator(cfg.alpha)
        w = wedge_ground_energy(cfg.alpha, cfg.extent, cfg.spacing or 1 / 16, BC.DIRICHLET, cfg.levels,
                                tol=max(cfg.tol, 1e-7), seed=cfg.seed)
        spacings, vals, rep = list(w.report.notes["spacings"]), list(w.report.notes["raw"]), w.extrapolation
        label, trunc = "wedge", cfg.extent
    for s, v in zip(spacings, vals):
        rows.append(Row(f"convergence:{label}", (("spacing", s),), v, exact, "ESTIMATE", "RAW",
                        spacing_finest=s, truncation=trunc, resid_tol=cfg.tol, seed=cfg.seed))
    rows.append(Row(f"convergence:{label}", (("observed_order", rep.observed_order),
                                            ("assumed_order", rep.assumed_order)),
                    rep.value, exact, "ESTIMATE", "EXTRAPOLATED_WARN" if rep.warning else "EXTRAPOLATED",
                    spacing_finest=spacings[-1], truncation=trunc, resid_tol=cfg.tol, extrap_err=rep.error,
                    seed=cfg.seed))
    errs = [abs(v - rep.value) for v in vals]
    fig = svg.line_plot(spacings, {"|value - extrapolant|": errs}, xlabel="spacing",
                        ylabel="difference", title=f"Grid convergence: {label}", logx=True, logy=True)
    return Outcome(rows, EXIT_OK, fig)


# ----------------------------------------------------------------- sweeps


def sweep_point(cfg: RunConfig, assignment: tuple) -> Row:
    """Evaluate one sweep point; failures become a status instead of an exception."""
    names = tuple(k for k, _ in assignment)
    pc = replace(cfg, **dict(assignment))
    params = tuple((k, getattr(pc, k)) for k in names)
    scen = f"sweep:{cfg.target}"
    try:
        if cfg.target == "lemma1":
            p = WaveguideParams(pc.L, pc.h, pc.eps, pc.alpha)
            r = window_rectangle_eigenvalue(p, _numerics(pc, 1 / 64))
            budget = 10 * r.error
            status = "PASS" if r.value > PI2 + budget else ("FAIL" if r.value < PI2 - budget else "INCONCLUSIVE")
            return Row(scen, params, r.value, PI2, "ESTIMATE", status, spacing_finest=r.notes["spacings"][-1],
                       resid_tol=pc.tol, extrap_err=r.error - pc.tol, seed=pc.seed)
        if cfg.target == "oscillator":
            r = solve_truncated_oscillator(pc.alpha, pc.beta, pc.spacing)
            energy, _ = exact_oscillator(pc.alpha)
            return Row(scen, params, r.lambda_beta, energy, "ESTIMATE", "OK", spacing_finest=r.spacing,
                       truncation=pc.beta, resid_tol=0.0, extrap_err=r.extrap_error, seed=pc.seed)
        if cfg.target == "lemma2a":
            r = essential_threshold_lower_bound(pc.alpha, pc.beta)
            return Row(scen, params, r.value, r.threshold, "LOWER_BOUND", r.notes["branch"],
                       spacing_finest=r.notes["spacing"], resid_tol=0.0, extrap_err=r.error, seed=pc.seed)
        if cfg.target == "lemma2b":
            M = m_rule(pc.L, pc.c)
            bulge_geometry(pc.L, M)
            r = variational_bound_bulge(pc.L, M)
            return Row(scen, params, r.threshold + r.margin, r.threshold, "UPPER_BOUND",
                       "BINDS" if r.margin < 0 else "NO_BINDING", extrap_err=1e-12 * r.value, seed=pc.seed)
        r = halfline_variational_bound(pc.alpha, pc.eps)
        return Row(scen, params, r.bound, r.threshold, "UPPER_BOUND",
                   "BINDS" if r.bound < r.threshold else "NO_BINDING", seed=pc.seed)
    except EigensolverError as exc:
        status = f"NONCONVERGED:{exc}"
    except Exception as exc:  # noqa: BLE001 -- a sweep never aborts on one point
        status = f"ERROR:{type(exc).__name__}:{exc}"
    return Row(scen, params, math.nan, math.nan, "ESTIMATE", status.replace("\n", " "), seed=pc.seed)


def _sweep_task(args):
    cfg, assignment = args
    return sweep_point(cfg, assignment)


def run_sweep(cfg: RunConfig) -> Outcome:
    axes = [[(cfg.param, v) for v in cfg.values]]
    if cfg.param2:
        axes.append([(cfg.param2, v) for v in cfg.values2])
    points = [tuple(a) for a in itertools.product(*axes)]
    tasks = [(cfg, a) for a in points]
    if cfg.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(_sweep_task, tasks))  # map keeps parameter order
    else:
        rows = [_sweep_task(t) for t in tasks]
    if cfg.param2:
        grid = [[rows[i * len(cfg.values2) + j].margin for j in range(len(cfg.values2))]
                for i in range(len(cfg.values))]
        fig = svg.heatmap(cfg.values, cfg.values2, grid, xlabel=cfg.param, ylabel=cfg.param2,
                          title=f"Sweep {cfg.target}: value - threshold")
    else:
        thr = next((r.threshold for r in rows if math.isfinite(r.threshold)), None)
        fig = svg.line_plot(list(cfg.values), {cfg.target: [r.value for r in rows]}, xlabel=cfg.param,
                            ylabel="value", title=f"Sweep {cfg.target}", hline=thr)
    return Outcome(rows, EXIT_OK, fig)


RUNNERS = {
    "lemma1": run_lemma1,
    "lemma2a": run_lemma2a,
    "lemma2b": run_lemma2b,
    "neumann": run_neumann,
    "combined": run_combined,
    "sweep": run_sweep,
    "convergence": run_convergence,
}


def run_scenario(cfg: RunConfig) -> int:
    """Run the configured scenario, write its CSV (and SVG), and return the exit code."""
    outcome = RUNNERS[cfg.scenario](cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{cfg.scenario}.csv"
    csv_path.write_text(render_csv(outcome.rows), encoding="utf-8")
    if cfg.plot and outcome.figure is not None:
        (out / f"{cfg.scenario}.svg").write_text(outcome.figure, encoding="utf-8")
    for r in outcome.rows:
        log.info("%s %s value=%r status=%s", r.scenario, dict(r.params), r.value, r.status)
    print(f"{cfg.scenario}: {len(outcome.rows)} row(s) -> {csv_path} (exit {outcome.code})")
    return outcome.code


# ----------------------------------------------------------------- argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _number(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _number_list(text: str) -> tuple:
    parts = [t for t in text.split(",") if t.strip()]
    return tuple(_number(t) for t in parts)


# (flag, config field, type, help)
_OPTIONS = (
    ("--L", "L", _number, "cavity length"),
    ("--h", "h", _number, "cavity width"),
    ("--eps", "eps", _number, "window opening"),
    ("--alpha", "alpha", _number, "interaction strength"),
    ("--beta", "beta", _number, "oscillator half-length"),
    ("--betas", "betas", _number_list, "comma-separated half-lengths"),
    ("--eps-list", "eps_list", _number_list, "comma-separated windows for the scaling fit"),
    ("--c", "c", _number, "M = 1 + c L^-2"),
    ("--L-min", "L_min", _number, "smallest L in searches"),
    ("--L-max", "L_max", _number, "largest L in searches"),
    ("--L-count", "L_count", int, "points of the geometric L grid"),
    ("--eps-primes", "eps_primes", _number_list, "window fractions eps/h tried by combined"),
    ("--extent", "extent", _number, "quarter-plane truncation X"),
    ("--spacing", "spacing", _number, "coarsest grid spacing (accepts 1/64)"),
    ("--levels", "levels", int, "number of halvings in the ladder"),
    ("--truncation", "truncation", _number, "starting arm length"),
    ("--max-truncation", "max_truncation", _number, "largest arm length"),
    ("--target", "target", str, "sweep target"),
    ("--param", "param", str, "swept parameter"),
    ("--values", "values", _number_list, "comma-separated values of the swept parameter"),
    ("--param2", "param2", str, "second swept parameter"),
    ("--values2", "values2", _number_list, "values of the second parameter"),
    ("--study", "study", str, "convergence study: rectangle, oscillator, window, wedge"),
)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--config", help="flat key = value config file")
    g.add_argument("--out", help="output directory")
    g.add_argument("--plot", action="store_const", const=True, default=None, help="also write an SVG")
    g.add_argument("--seed", type=int, help="start-vector seed")
    g.add_argument("--threads", type=int, help="worker processes for sweeps")
    g.add_argument("--tol", type=_number, help="eigen-residual tolerance")
    g.add_argument("-v", "--verbose", action="store_true", help="log every row")
    s = common.add_argument_group("scenario")
    for flag, dest, typ, helptext in _OPTIONS:
        s.add_argument(flag, dest=dest, type=typ, help=helptext)
    s.add_argument("--scaling", dest="scaling", action="store_const", const=True, default=None,
                   help="fit the window-shift exponent (lemma1)")
    s.add_argument("--no-scaling", dest="scaling", action="store_const", const=False)

    parser = _Parser(prog="wglab", description="Bound states of one and two particles in a bulged waveguide.")
    sub = parser.add_subparsers(dest="scenario", required=True, parser_class=_Parser)
    for name in SCENARIOS:
        sub.add_parser(name, parents=[common], help=f"run the {name} scenario")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"wglab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    overrides = {k: v for k, v in vars(args).items() if k not in ("config", "scenario", "verbose")}
    try:
        cfg = load_config(args.config, overrides, args.scenario)
        return run_scenario(cfg)
    except ConfigError as exc:
        print(f"wglab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EigensolverError as exc:
        print(f"wglab: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
