"""Planar domains, their uniform cell-centred discretisation, and the 5-point operator.

Conventions
-----------
Cells have side ``s`` and every boundary lies on a cell *face*.  A face between
two active cells is either open (coupled), or cut by a zero-thickness wall
carrying a boundary condition.  Per axis with kinetic weight ``w = c / s**2``:

* open face:      quadratic form gains ``w * (u_i - u_j)**2``
* DIRICHLET face: antisymmetric ghost, each adjacent active cell gains ``2 w u_i**2``
* NEUMANN face:   mirror ghost, no contribution

so the discrete forms are ordered NEUMANN <= open <= DIRICHLET face by face,
which is the discrete counterpart of Dirichlet-Neumann bracketing.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

CACHE_VERSION = 1

OPEN, DIRICHLET_CODE, NEUMANN_CODE = 0, 1, 2


class BC(str, Enum):
    DIRICHLET = "DIRICHLET"
    NEUMANN = "NEUMANN"

    @property
    def code(self) -> int:
        return DIRICHLET_CODE if self is BC.DIRICHLET else NEUMANN_CODE


class DomainError(ValueError):
    """Invalid geometry, parameters, or an inconsistent boundary tagging."""


@dataclass(frozen=True)
class WaveguideParams:
    """Cavity length ``L``, cavity width ``h``, window opening ``epsilon`` and
    interaction strength ``alpha``.

    ``epsilon = 0`` is admitted and means a closed cavity (no window); it is
    rejected by :func:`build_waveguide`, which needs an open coupling.
    """

    L: float
    h: float
    epsilon: float
    alpha: float = 1.0

    def __post_init__(self):
        for name in ("L", "h", "epsilon", "alpha"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.L <= 0:
            raise DomainError(f"L must be positive, got {self.L}")
        if self.h <= 0:
            raise DomainError(f"h must be positive, got {self.h}")
        if not 0 <= self.epsilon < 1:
            raise DomainError(f"epsilon must satisfy 0 <= epsilon < 1, got {self.epsilon}")
        if self.epsilon >= self.h:
            raise DomainError("window opening epsilon must be smaller than the cavity width h")
        if self.alpha <= 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")

    def check_waveguide_regime(self):
        """Enforce ``L > 0, h > 1, 0 < epsilon < 1`` (the open bulge waveguide)."""
        if self.h <= 1:
            raise DomainError(f"waveguide needs h > 1, got h={self.h}")
        if not 0 < self.epsilon < 1:
            raise DomainError(f"waveguide needs 0 < epsilon < 1, got {self.epsilon}")

    @property
    def inverse_square_sum(self) -> float:
        return self.L ** -2 + self.h ** -2


@dataclass(frozen=True)
class Segment:
    """Axis-aligned boundary piece.

    ``axis=0`` is the line ``x = coord`` (faces normal to x) spanning
    ``lo < y < hi``; ``axis=1`` is the line ``y = coord`` spanning ``lo < x < hi``.
    """

    axis: int
    coord: float
    lo: float
    hi: float
    bc: BC
    kind: str = "wall"


@dataclass(frozen=True)
class Domain2D:
    """A region in reference coordinates with tagged boundary segments.

    ``metric`` holds the physical length of one reference unit per axis; the
    kinetic coefficient of each axis is divided by ``metric**2`` at assembly.
    """

    name: str
    bbox: tuple
    inside: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(compare=False, repr=False)
    segments: tuple
    metric: tuple = (1.0, 1.0)
    decoupled: bool = False
    key: str = ""

    def breakpoints(self) -> tuple:
        xs = {self.bbox[0], self.bbox[1]}
        ys = {self.bbox[2], self.bbox[3]}
        for seg in self.segments:
            (xs if seg.axis == 0 else ys).add(seg.coord)
            (ys if seg.axis == 0 else xs).update((seg.lo, seg.hi))
        return tuple(sorted(xs)), tuple(sorted(ys))


@dataclass(frozen=True)
class Grid2D:
    spacing: float
    x0: float
    y0: float
    nx: int
    ny: int
    active: np.ndarray = field(repr=False)
    index: np.ndarray = field(repr=False)
    xfaces: np.ndarray = field(repr=False)
    yfaces: np.ndarray = field(repr=False)
    snap: dict = field(default_factory=dict, repr=False)
    domain_key: str = ""

    @property
    def n(self) -> int:
        return int(self.active.sum())

    @property
    def xc(self) -> np.ndarray:
        return self.x0 + (np.arange(self.nx) + 0.5) * self.spacing

    @property
    def yc(self) -> np.ndarray:
        return self.y0 + (np.arange(self.ny) + 0.5) * self.spacing

    @property
    def max_snap(self) -> float:
        return max((abs(v) for v in self.snap.values()), default=0.0)

    def centers(self):
        return np.meshgrid(self.xc, self.yc, indexing="ij")

    def to_array(self, vec: np.ndarray, fill=np.nan) -> np.ndarray:
        out = np.full((self.nx, self.ny), fill, dtype=float)
        out[self.active] = vec
        return out


@dataclass(frozen=True)
class SparseOperator:
    matrix: sp.csr_matrix = field(repr=False)
    spacing: float
    domain_id: str
    potential_id: str
    grid: Optional[Grid2D] = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def indptr(self):
        return self.matrix.indptr

    @property
    def indices(self):
        return self.matrix.indices

    @property
    def data(self):
        return self.matrix.data

    def is_exactly_symmetric(self) -> bool:
        diff = self.matrix - self.matrix.T
        return diff.count_nonzero() == 0


# --------------------------------------------------------------------------- builders


def _fmt(*vals) -> str:
    return ",".join(repr(float(v)) for v in vals)


def build_waveguide(params: WaveguideParams, truncation: float, truncation_bc: BC = BC.DIRICHLET,
                    *, window_bc: Optional[BC] = None, quarter: bool = False,
                    straight: bool = False) -> Domain2D:
    """The waveguide ``|y| < f(x)`` truncated to ``|x| < L/2 + truncation``.

    ``window_bc`` cuts the two windows with the given condition (``None``
    keeps them open); NEUMANN cuts give the decoupled bracketing domain.
    ``quarter`` keeps ``x > 0, y > 0`` with NEUMANN symmetry faces on the
    axes (the even-even sector, which holds the ground state).  ``straight``
    replaces the geometry by the plain strip of width 1 (``f = 1/2``).
    """
    L, h, eps = params.L, params.h, params.epsilon
    X = float(truncation)
    if not straight:
        params.check_waveguide_regime()
    if not np.isfinite(X) or X <= L / 2:
        raise DomainError(f"truncation X={X} must exceed L/2={L / 2}")
    xe = L / 2 + X
    half_h = 0.5 if straight else h / 2
    half_eps = eps / 2

    def f(x):
        if straight:
            return np.full_like(x, 0.5)
        ax = np.abs(x)
        return np.where(ax < L / 2, h / 2, np.where(ax > L / 2, 0.5, half_eps))

    def inside(x, y):
        return np.abs(y) < f(x)

    segs = []
    xlo = 0.0 if quarter else -xe
    ylo = 0.0 if quarter else -half_h
    signs = (1,) if quarter else (1, -1)
    if straight:
        for sy in signs:
            segs.append(Segment(1, sy * 0.5, xlo, xe, BC.DIRICHLET))
    else:
        for sy in signs:
            segs.append(Segment(1, sy * h / 2, -L / 2, L / 2, BC.DIRICHLET))
            for sx in signs:
                lo, hi = sorted((sx * L / 2, sx * xe))
                segs.append(Segment(1, sy * 0.5, lo, hi, BC.DIRICHLET))
        for sx in signs:
            segs.append(Segment(0, sx * L / 2, half_eps, h / 2, BC.DIRICHLET, "barrier"))
            if not quarter:
                segs.append(Segment(0, sx * L / 2, -h / 2, -half_eps, BC.DIRICHLET, "barrier"))
            if window_bc is not None:
                wlo = 0.0 if quarter else -half_eps
                segs.append(Segment(0, sx * L / 2, wlo, half_eps, window_bc, "window"))
    for sx in signs:
        segs.append(Segment(0, sx * xe, 0.0 if quarter else -0.5, 0.5, truncation_bc, "truncation"))
    if quarter:
        segs.append(Segment(0, 0.0, 0.0, half_h, BC.NEUMANN, "symmetry"))
        segs.append(Segment(1, 0.0, 0.0, xe, BC.NEUMANN, "symmetry"))

    name = "strip" if straight else "waveguide"
    key = (f"{name}:{_fmt(L, h, eps, X)}:{truncation_bc.value}:"
           f"{window_bc.value if window_bc else 'open'}:{'q' if quarter else 'f'}")
    return Domain2D(
        name=name,
        bbox=(xlo, xe, ylo, half_h),
        inside=inside,
        segments=tuple(segs),
        decoupled=window_bc is not None and not straight,
        key=key,
    )


def build_window_rectangle(params: WaveguideParams, *, window_bc: BC = BC.NEUMANN,
                           quarter: bool = False, normalize_y: bool = True) -> Domain2D:
    """The cavity ``(-L/2, L/2) x (-h/2, h/2)`` with DIRICHLET walls and the
    two window segments ``{x = +-L/2, |y| < epsilon/2}`` carrying ``window_bc``.

    With ``normalize_y`` the domain is stored in ``(x, y/h)`` so that the
    window breakpoint ``epsilon/(2h)`` sits on a reference grid independent of
    ``h``; the metric ``(1, h)`` restores physical units at assembly.
    """
    L, h, eps = params.L, params.h, params.epsilon
    sy_ = h if normalize_y else 1.0
    hy = h / 2 / sy_
    we = eps / 2 / sy_
    signs = (1,) if quarter else (1, -1)
    xlo = 0.0 if quarter else -L / 2
    ylo = 0.0 if quarter else -hy
    segs = []
    for sgn in signs:
        segs.append(Segment(1, sgn * hy, xlo, L / 2, BC.DIRICHLET))
    for sx in signs:
        for sgn in signs:
            lo, hi = sorted((sgn * we, sgn * hy))
            segs.append(Segment(0, sx * L / 2, lo, hi, BC.DIRICHLET, "barrier"))
        if eps > 0:
            segs.append(Segment(0, sx * L / 2, 0.0 if quarter else -we, we, window_bc, "window"))
    if quarter:
        segs.append(Segment(0, 0.0, 0.0, hy, BC.NEUMANN, "symmetry"))
        segs.append(Segment(1, 0.0, 0.0, L / 2, BC.NEUMANN, "symmetry"))
    key = (f"window_rect:{_fmt(L, h, eps)}:{window_bc.value}:{'q' if quarter else 'f'}:"
           f"{'n' if normalize_y else 'p'}")
    return Domain2D(
        name="window_rectangle",
        bbox=(xlo, L / 2, ylo, hy),
        inside=lambda x, y: np.ones(np.broadcast(x, y).shape, dtype=bool),
        segments=tuple(segs),
        metric=(1.0, sy_),
        key=key,
    )


def build_quarter_plane(extent: float, truncation_bc: BC = BC.DIRICHLET) -> Domain2D:
    """``[0, X]^2`` with NEUMANN axes and ``truncation_bc`` on the far faces."""
    X = float(extent)
    if not np.isfinite(X) or X <= 0:
        raise DomainError(f"extent must be positive, got {extent}")
    segs = (
        Segment(0, 0.0, 0.0, X, BC.NEUMANN, "axis"),
        Segment(1, 0.0, 0.0, X, BC.NEUMANN, "axis"),
        Segment(0, X, 0.0, X, truncation_bc, "truncation"),
        Segment(1, X, 0.0, X, truncation_bc, "truncation"),
    )
    return Domain2D(
        name="quarter_plane",
        bbox=(0.0, X, 0.0, X),
        inside=lambda x, y: np.ones(np.broadcast(x, y).shape, dtype=bool),
        segments=segs,
        key=f"quarter_plane:{_fmt(X)}:{truncation_bc.value}",
    )


def build_rectangle(x_range: Sequence[float], y_range: Sequence[float],
                    bcs: Union[BC, dict] = BC.DIRICHLET, name: str = "rectangle") -> Domain2D:
    """Axis-aligned rectangle; ``bcs`` is one condition or a mapping with keys
    ``left``, ``right``, ``bottom``, ``top``."""
    x0, x1 = map(float, x_range)
    y0, y1 = map(float, y_range)
    if not (x1 > x0 and y1 > y0):
        raise DomainError("empty rectangle")
    if isinstance(bcs, BC):
        bcs = dict.fromkeys(("left", "right", "bottom", "top"), bcs)
    segs = (
        Segment(0, x0, y0, y1, bcs["left"]),
        Segment(0, x1, y0, y1, bcs["right"]),
        Segment(1, y0, x0, x1, bcs["bottom"]),
        Segment(1, y1, x0, x1, bcs["top"]),
    )
    tag = ",".join(bcs[k].value[0] for k in ("left", "right", "bottom", "top"))
    return Domain2D(
        name=name,
        bbox=(x0, x1, y0, y1),
        inside=lambda x, y: np.ones(np.broadcast(x, y).shape, dtype=bool),
        segments=segs,
        key=f"{name}:{_fmt(x0, x1, y0, y1)}:{tag}",
    )


# --------------------------------------------------------------------------- grids


def aligned_spacing(domain: Domain2D, max_spacing: float, *, max_denominator: int = 10 ** 6) -> float:
    """Largest ``s <= max_spacing`` placing every breakpoint of ``domain`` on a face.

    Breakpoints are read as rationals; if their common divisor is not
    representable the plain ``max_spacing`` is returned and snapping applies.
    """
    xs, ys = domain.breakpoints()
    origin = (domain.bbox[0], domain.bbox[2])
    offsets = [Fraction(v - origin[0]).limit_denominator(max_denominator) for v in xs]
    offsets += [Fraction(v - origin[1]).limit_denominator(max_denominator) for v in ys]
    g = Fraction(0)
    for q in offsets:
        g = _frac_gcd(g, abs(q))
    if g == 0:
        return float(max_spacing)
    k = int(np.ceil(float(g) / max_spacing - 1e-12))
    s = g / max(k, 1)
    return float(s)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd
    if a == 0:
        return b
    if b == 0:
        return a
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return Fraction(gcd(int(a * den), int(b * den)), den)


def discretize(domain: Domain2D, spacing: float) -> Grid2D:
    """Uniform cell-centred grid over ``domain.bbox`` with tagged faces.

    Every breakpoint is snapped to the nearest face line; displacements are
    recorded in ``grid.snap`` and must stay below ``spacing / 2``.
    """
    s = float(spacing)
    if not np.isfinite(s) or s <= 0:
        raise DomainError(f"spacing must be positive, got {spacing}")
    xmin, xmax, ymin, ymax = domain.bbox
    nx = int(round((xmax - xmin) / s))
    ny = int(round((ymax - ymin) / s))
    if nx < 1 or ny < 1:
        raise DomainError(f"spacing {s} too coarse for bounding box {domain.bbox}")
    snap = {}

    def snap_to(value, origin, label):
        k = int(round((value - origin) / s))
        d = value - (origin + k * s)
        if abs(d) >= 0.5 * s * (1 - 1e-9):
            raise DomainError(f"breakpoint {label}={value} sits half-way between faces at spacing {s}")
        if abs(d) > 1e-12 * max(1.0, abs(value)):
            snap[label] = d
        return k

    snap_to(xmax, xmin, "x_max")
    snap_to(ymax, ymin, "y_max")
    xc = xmin + (np.arange(nx) + 0.5) * s
    yc = ymin + (np.arange(ny) + 0.5) * s
    X, Y = np.meshgrid(xc, yc, indexing="ij")
    active = np.asarray(domain.inside(X, Y), dtype=bool)
    if not active.any():
        raise DomainError("no active cells")
    index = np.full(active.shape, -1, dtype=np.int64)
    index[active] = np.arange(int(active.sum()))

    xfaces = np.zeros((nx + 1, ny), dtype=np.int8)
    yfaces = np.zeros((nx, ny + 1), dtype=np.int8)
    tagged_x = np.zeros(xfaces.shape, dtype=bool)
    tagged_y = np.zeros(yfaces.shape, dtype=bool)
    pad_x = np.zeros((nx + 2, ny), dtype=bool)
    pad_x[1:-1] = active
    pad_y = np.zeros((nx, ny + 2), dtype=bool)
    pad_y[:, 1:-1] = active
    # a face is a boundary face when at least one neighbour is active
    xneigh = pad_x[:-1] | pad_x[1:]
    yneigh = pad_y[:, :-1] | pad_y[:, 1:]

    for n_seg, seg in enumerate(domain.segments):
        if seg.axis == 0:
            k = snap_to(seg.coord, xmin, f"seg{n_seg}.x")
            if not 0 <= k <= nx:
                raise DomainError(f"segment {seg} outside bounding box")
            cells = (yc > seg.lo) & (yc < seg.hi)
            faces, tags, neigh, sel = xfaces, tagged_x, xneigh, (k, cells)
        else:
            k = snap_to(seg.coord, ymin, f"seg{n_seg}.y")
            if not 0 <= k <= ny:
                raise DomainError(f"segment {seg} outside bounding box")
            cells = (xc > seg.lo) & (xc < seg.hi)
            faces, tags, neigh, sel = yfaces, tagged_y, yneigh, (cells, k)
        if seg.axis == 0:
            for lim, label in ((seg.lo, "lo"), (seg.hi, "hi")):
                if ymin < lim < ymax:
                    snap_to(lim, ymin, f"seg{n_seg}.{label}")
        else:
            for lim, label in ((seg.lo, "lo"), (seg.hi, "hi")):
                if xmin < lim < xmax:
                    snap_to(lim, xmin, f"seg{n_seg}.{label}")
        hit = np.zeros(faces.shape, dtype=bool)
        hit[sel] = True
        hit &= neigh
        clash = hit & tags & (faces != seg.bc.code)
        if clash.any():
            raise DomainError(f"segment {seg} conflicts with another condition on {int(clash.sum())} faces")
        faces[hit] = seg.bc.code
        tags |= hit

    # untagged faces with exactly one active neighbour
    x_one = pad_x[:-1] ^ pad_x[1:]
    y_one = pad_y[:, :-1] ^ pad_y[:, 1:]
    bad_x = x_one & ~tagged_x
    bad_y = y_one & ~tagged_y
    if bad_x.any() or bad_y.any():
        if bad_x.any():
            i, j = np.argwhere(bad_x)[0]
            where = (xmin + i * s, yc[j])
        else:
            i, j = np.argwhere(bad_y)[0]
            where = (xc[i], ymin + j * s)
        raise DomainError(f"untagged boundary face near {where} ({int(bad_x.sum() + bad_y.sum())} faces)")

    grid = Grid2D(spacing=s, x0=xmin, y0=ymin, nx=nx, ny=ny, active=active, index=index,
                  xfaces=xfaces, yfaces=yfaces, snap=snap, domain_key=domain.key)
    if not domain.decoupled:
        ncomp = _component_count(grid)
        if ncomp != 1:
            raise DomainError(f"active region of {domain.name} has {ncomp} components; "
                              "flag it as decoupled if intended")
    return grid


def _open_pairs(grid: Grid2D):
    """Index pairs coupled through an open face, per axis."""
    pairs = []
    a, idx = grid.active, grid.index
    for axis, faces in ((0, grid.xfaces), (1, grid.yfaces)):
        if axis == 0:
            both = a[:-1] & a[1:] & (faces[1:-1] == OPEN)
            i, j = idx[:-1][both], idx[1:][both]
        else:
            both = a[:, :-1] & a[:, 1:] & (faces[:, 1:-1] == OPEN)
            i, j = idx[:, :-1][both], idx[:, 1:][both]
        pairs.append((i, j))
    return pairs


def _component_count(grid: Grid2D) -> int:
    n = grid.n
    rows, cols = [], []
    for i, j in _open_pairs(grid):
        rows.append(i)
        cols.append(j)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    adj = sp.coo_matrix((np.ones(r.size), (r, c)), shape=(n, n))
    return connected_components(adj, directed=False)[0]


# --------------------------------------------------------------------------- assembly

Potential = Union[None, Callable[[np.ndarray, np.ndarray], np.ndarray], np.ndarray]


def assemble_operator(domain: Domain2D, grid: Grid2D, potential: Potential = None,
                      mass_weights: Sequence[float] = (1.0, 1.0), *,
                      potential_id: Optional[str] = None) -> SparseOperator:
    """Sparse ``-(c_x d_xx + c_y d_yy) + V`` on the active cells of ``grid``.

    ``potential`` is a callable of physical cell-centre coordinates, an array
    shaped ``(nx, ny)``, or ``None``.  When ``WGLAB_CACHE_DIR`` is set and a
    ``potential_id`` is given, the assembled matrix is cached on disk.
    """
    if grid.domain_key != domain.key:
        raise DomainError("grid was not built from this domain")
    cx, cy = (float(m) for m in mass_weights)
    if potential is None:
        potential_id = potential_id or "zero"
    cache_key = None
    if potential_id is not None:
        cache_key = _cache_key(domain, grid, potential_id, (cx, cy))
        cached = _cache_load(cache_key)
        if cached is not None:
            return SparseOperator(cached, grid.spacing, domain.key, potential_id, grid)

    s = grid.spacing
    mx, my = domain.metric
    wx = cx / (mx * mx * s * s)
    wy = cy / (my * my * s * s)
    n = grid.n
    a, idx = grid.active, grid.index
    diag = np.zeros(n)
    rows, cols, vals = [], [], []
    for (i, j), w in zip(_open_pairs(grid), (wx, wy)):
        rows += [i, j]
        cols += [j, i]
        vals += [np.full(i.size, -w), np.full(i.size, -w)]
        np.add.at(diag, i, w)
        np.add.at(diag, j, w)
    # Dirichlet faces: antisymmetric ghost on each active side
    xd = grid.xfaces == DIRICHLET_CODE
    left = np.zeros_like(xd)
    left[1:] = a
    right = np.zeros_like(xd)
    right[:-1] = a
    np.add.at(diag, idx[(xd & left)[1:]], 2 * wx)
    np.add.at(diag, idx[(xd & right)[:-1]], 2 * wx)
    yd = grid.yfaces == DIRICHLET_CODE
    below = np.zeros_like(yd)
    below[:, 1:] = a
    above = np.zeros_like(yd)
    above[:, :-1] = a
    np.add.at(diag, idx[(yd & below)[:, 1:]], 2 * wy)
    np.add.at(diag, idx[(yd & above)[:, :-1]], 2 * wy)

    if potential is not None:
        if callable(potential):
            X, Y = grid.centers()
            V = np.asarray(potential(X * mx, Y * my), dtype=float)
        else:
            V = np.asarray(potential, dtype=float)
        if V.shape != a.shape:
            raise DomainError(f"potential shape {V.shape} does not match grid {a.shape}")
        Va = V[a]
        if not np.all(np.isfinite(Va)):
            raise DomainError("potential is not finite on every active cell")
        diag = diag + Va

    rows.append(np.arange(n))
    cols.append(np.arange(n))
    vals.append(diag)
    mat = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    mat.sort_indices()
    if cache_key is not None:
        _cache_store(cache_key, mat)
    return SparseOperator(mat, s, domain.key, potential_id or "anonymous", grid)


# --------------------------------------------------------------------------- cache


def _cache_dir() -> Optional[Path]:
    d = os.environ.get("WGLAB_CACHE_DIR")
    return Path(d) if d else None


def _cache_key(domain, grid, potential_id, weights) -> str:
    text = f"v{CACHE_VERSION}|{domain.key}|{grid.spacing!r}|{potential_id}|{weights!r}|{domain.metric!r}"
    return hashlib.sha256(text.encode()).hexdigest()


def _cache_load(key: str):
    d = _cache_dir()
    if d is None:
        return None
    path = d / f"{key}.npz"
    if not path.exists():
        return None
    try:
        with np.load(path) as z:
            if int(z["version"]) != CACHE_VERSION:
                return None
            n = int(z["n"])
            return sp.csr_matrix((z["data"], z["indices"], z["indptr"]), shape=(n, n))
    except (OSError, KeyError, ValueError):
        return None


def _cache_store(key: str, mat) -> None:
    d = _cache_dir()
    if d is None:
        return
    d.mkdir(parents=True, exist_ok=True)
    tmp = d / f"{key}.tmp.npz"
    np.savez(tmp, version=CACHE_VERSION, n=mat.shape[0], data=mat.data, indices=mat.indices, indptr=mat.indptr)
    os.replace(tmp, d / f"{key}.npz")
