"""Lowest eigenpairs of symmetric sparse operators and Richardson extrapolation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

logger = logging.getLogger(__name__)

DENSE_MAX = 1500
SHIFT_INVERT_MAX = 400_000
CLUSTER_TOL = 1e-9


class EigensolverError(RuntimeError):
    """Raised when the requested residual tolerance is not met.

    ``residuals`` and ``eigenvalues`` hold the best values reached.
    """

    def __init__(self, message, residuals=None, eigenvalues=None):
        super().__init__(message)
        self.residuals = None if residuals is None else np.asarray(residuals)
        self.eigenvalues = None if eigenvalues is None else np.asarray(eigenvalues)


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    residuals: np.ndarray
    iterations: int
    converged: bool
    seed: int
    method: str
    clusters: tuple = ()

    @property
    def ground(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))


@dataclass(frozen=True)
class ExtrapolationReport:
    spacings: tuple
    values: tuple
    value: float
    observed_order: float
    error: float
    assumed_order: float
    extrapolants: tuple = ()
    warning: bool = False


def _as_matrix(op):
    A = getattr(op, "matrix", op)
    if sp.issparse(A):
        return A.tocsr()
    return np.asarray(A, dtype=float)


def _gershgorin_lower(A) -> float:
    if sp.issparse(A):
        d = A.diagonal()
        off = np.asarray(abs(A).sum(axis=1)).ravel() - np.abs(d)
    else:
        d = np.diag(A)
        off = np.abs(A).sum(axis=1) - np.abs(d)
    return float(np.min(d - off))


def _sign_fix(V: np.ndarray) -> np.ndarray:
    V = V.copy()
    for j in range(V.shape[1]):
        i = int(np.argmax(np.abs(V[:, j])))
        if V[i, j] < 0:
            V[:, j] = -V[:, j]
    return V


def _clusters(w: np.ndarray) -> list:
    groups, cur = [], [0]
    for i in range(1, w.size):
        if abs(w[i] - w[cur[-1]]) <= CLUSTER_TOL * max(1.0, abs(w[i])):
            cur.append(i)
        else:
            groups.append(tuple(cur))
            cur = [i]
    groups.append(tuple(cur))
    return groups


def lowest_eigenpairs(op, k: int = 1, tol: float = 1e-8, seed: int = 0, *,
                      shift: Optional[float] = None, method: str = "auto",
                      max_iter: Optional[int] = None) -> SpectrumResult:
    """The ``k`` smallest eigenpairs of a symmetric operator.

    ``method`` is ``dense``, ``shift-invert`` (sparse LU of ``A - shift I``),
    ``lobpcg`` (smoothed-aggregation preconditioned) or ``auto``.  ``shift``
    should lie below the lowest eigenvalue; a Gershgorin bound is used when
    omitted.  Residuals ``||A v - lam v||`` above ``tol`` raise
    :class:`EigensolverError`.
    """
    A = _as_matrix(op)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("operator must be square")
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= n):
        raise ValueError(f"k must satisfy 1 <= k <= N={n}, got {k}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter is None:
        max_iter = int(50 * k * math.sqrt(n)) + 10
    if method == "auto":
        if n <= DENSE_MAX:
            method = "dense"
        elif n <= SHIFT_INVERT_MAX:
            method = "shift-invert"
        else:
            method = "lobpcg"
    if method != "dense" and k >= n - 1:
        method = "dense"
    rng = np.random.default_rng(seed)

    if method == "dense":
        dense = A.toarray() if sp.issparse(A) else A
        w, V = sla.eigh(dense, subset_by_index=[0, k - 1])
        iterations = 1
    elif method == "shift-invert":
        w, V, iterations = _shift_invert(A, k, shift, rng, max_iter)
    elif method == "lobpcg":
        try:
            w, V, iterations = _lobpcg(A, k, tol, rng, max_iter)
        except EigensolverError as exc:
            if n > 4 * SHIFT_INVERT_MAX:
                raise
            logger.info("lobpcg failed (%s); retrying with shift-invert", exc)
            w, V, iterations = _shift_invert(A, k, shift, rng, max_iter)
            method = "shift-invert"
    else:
        raise ValueError(f"unknown method {method!r}")

    order = np.argsort(w)
    w, V = np.asarray(w)[order], np.asarray(V)[:, order]
    V = V / np.linalg.norm(V, axis=0)
    groups = _clusters(w)
    for g in groups:
        if len(g) > 1:
            Q, _ = np.linalg.qr(V[:, list(g)])
            H = Q.T @ (A @ Q)
            mu, R = np.linalg.eigh(0.5 * (H + H.T))
            V[:, list(g)] = Q @ R
            w[list(g)] = mu
    V = _sign_fix(V)
    res = np.linalg.norm(A @ V - V * w, axis=0)
    if np.any(res > tol):
        raise EigensolverError(
            f"{method}: residuals {res.max():.3e} exceed tol {tol:.1e}", residuals=res, eigenvalues=w)
    return SpectrumResult(eigenvalues=w, eigenvectors=V, residuals=res, iterations=int(iterations),
                          converged=True, seed=seed, method=method,
                          clusters=tuple(g for g in groups if len(g) > 1))


def _shift_invert(A, k, shift, rng, max_iter):
    n = A.shape[0]
    if shift is None:
        g = _gershgorin_lower(A)
        shift = g - 1e-3 * max(1.0, abs(g))
    lu = spla.splu((A - shift * sp.identity(n, format="csc")).tocsc())
    count = [0]

    def solve(x):
        count[0] += 1
        return lu.solve(np.asarray(x, dtype=float))

    opinv = spla.LinearOperator((n, n), matvec=solve, dtype=float)
    v0 = rng.standard_normal(n)
    try:
        w, V = spla.eigsh(A, k=k, sigma=shift, which="LM", OPinv=opinv, v0=v0, maxiter=max_iter)
    except spla.ArpackNoConvergence as exc:
        res = None
        if exc.eigenvectors is not None and exc.eigenvectors.size:
            Vb = exc.eigenvectors
            res = np.linalg.norm(A @ Vb - Vb * exc.eigenvalues, axis=0)
        raise EigensolverError("shift-invert Lanczos did not converge", residuals=res,
                               eigenvalues=exc.eigenvalues) from exc
    return w, V, count[0]


def _lobpcg(A, k, tol, rng, max_iter):
    import pyamg

    n = A.shape[0]
    ml = pyamg.smoothed_aggregation_solver(A, symmetry="symmetric")
    M = ml.aspreconditioner()
    block = max(k + 1, 2)
    X0 = rng.standard_normal((n, block))
    w, V, hist = spla.lobpcg(A, X0, M=M, largest=False, tol=0.5 * tol, maxiter=max_iter,
                             retResidualNormsHistory=True)
    w, V = np.asarray(w)[:k], np.asarray(V)[:, :k]
    res = np.linalg.norm(A @ V - V * w, axis=0)
    if np.any(res > tol):
        raise EigensolverError("lobpcg did not reach the residual tolerance", residuals=res, eigenvalues=w)
    return w, V, len(hist)


def richardson_extrapolate(values: Sequence[float], spacings: Sequence[float],
                           assumed_order: float = 2) -> ExtrapolationReport:
    """Eliminate the leading ``s**p`` error term from values at halved spacings.

    The error estimate is the difference of the last two extrapolants, or the
    size of the single Richardson correction when only two spacings exist.
    The observed order is ``log2`` of the last successive-difference ratio.
    """
    v = [float(x) for x in values]
    s = [float(x) for x in spacings]
    if len(v) != len(s):
        raise ValueError("values and spacings must have equal length")
    if len(v) < 2:
        raise ValueError("need at least two spacings")
    for a, b in zip(s, s[1:]):
        if not math.isclose(b, a / 2, rel_tol=1e-12):
            raise ValueError(f"spacings must halve exactly, got {a} -> {b}")
    p = float(assumed_order)
    r = 2.0 ** p
    ex = [(r * b - a) / (r - 1) for a, b in zip(v, v[1:])]
    if len(ex) >= 2:
        err = abs(ex[-1] - ex[-2])
    else:
        err = abs(ex[-1] - v[-1])
    order = float("nan")
    if len(v) >= 3:
        d1, d2 = v[-3] - v[-2], v[-2] - v[-1]
        if d1 != 0 and d2 != 0 and d1 / d2 > 0:
            order = math.log2(d1 / d2)
    warning = not (abs(order - p) <= 0.2) if not math.isnan(order) else True
    return ExtrapolationReport(spacings=tuple(s), values=tuple(v), value=ex[-1], observed_order=order,
                               error=err, assumed_order=p, extrapolants=tuple(ex), warning=warning)
