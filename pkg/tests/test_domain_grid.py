import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from wglab.domain_grid import (BC, DomainError, WaveguideParams, aligned_spacing, assemble_operator,
                               build_quarter_plane, build_rectangle, build_waveguide,
                               build_window_rectangle, discretize)
from wglab.eigensolve import lowest_eigenpairs


def lowest(dom, s, potential=None, k=1):
    grid = discretize(dom, s)
    op = assemble_operator(dom, grid, potential)
    return lowest_eigenpairs(op, k, tol=1e-8).eigenvalues


# ----------------------------------------------------------------- parameters


@pytest.mark.parametrize("kw", [
    dict(L=0.0, h=1.2, epsilon=0.1),
    dict(L=2.0, h=-1.0, epsilon=0.1),
    dict(L=2.0, h=1.2, epsilon=1.0),
    dict(L=2.0, h=1.2, epsilon=1.5),
    dict(L=2.0, h=1.2, epsilon=-0.1),
    dict(L=2.0, h=1.2, epsilon=0.1, alpha=0.0),
    dict(L=math.nan, h=1.2, epsilon=0.1),
])
def test_invalid_params_rejected(kw):
    with pytest.raises(DomainError):
        WaveguideParams(**kw)


def test_waveguide_regime_needs_wide_cavity_and_open_window():
    with pytest.raises(DomainError):
        WaveguideParams(2.0, 0.9, 0.1).check_waveguide_regime()
    with pytest.raises(DomainError):
        build_waveguide(WaveguideParams(2.0, 1.2, 0.0), 6.0)


@given(eps=st.floats(1.0, 10.0))
def test_window_of_unit_size_or_more_rejected(eps):
    with pytest.raises(DomainError):
        WaveguideParams(2.0, 1.2, eps)


# ----------------------------------------------------------------- geometry


def test_waveguide_shape_matches_sketch():
    p = WaveguideParams(2.0, 1.2, 0.1)
    dom = build_waveguide(p, 6.0)
    assert dom.bbox == (-7.0, 7.0, -0.6, 0.6)
    grid = discretize(dom, 0.05)
    assert grid.max_snap < 1e-12
    a = grid.active
    xc, yc = grid.xc, grid.yc
    arm = np.argmin(abs(xc - 4.0))
    cav = np.argmin(abs(xc - 0.0))
    assert np.isclose(a[arm].sum() * grid.spacing, 1.0)
    assert np.isclose(a[cav].sum() * grid.spacing, 1.2)
    windows = [seg for seg in dom.segments if seg.kind == "barrier"]
    assert {round(s.coord, 12) for s in windows} == {-1.0, 1.0}
    assert all(min(abs(s.lo), abs(s.hi)) == pytest.approx(0.05) for s in windows)


def test_truncation_inside_cavity_rejected():
    with pytest.raises(DomainError):
        build_waveguide(WaveguideParams(2.0, 1.2, 0.1), 0.5)


def test_window_closed_by_coarse_grid_is_detected():
    # the opening snaps shut at this spacing, leaving three disconnected pieces
    dom = build_waveguide(WaveguideParams(1.0, 2.0, 0.0625), 1.5)
    with pytest.raises(DomainError, match="components"):
        discretize(dom, 0.1)


def test_quarter_plane_rejects_empty_extent():
    with pytest.raises(DomainError):
        build_quarter_plane(0.0)


@settings(max_examples=25, deadline=None)
@given(s=st.floats(0.01, 0.2))
def test_snap_displacement_below_half_spacing(s):
    dom = build_waveguide(WaveguideParams(2.0, 1.3, 0.37), 3.0)
    try:
        grid = discretize(dom, s)
    except DomainError as exc:
        # an exact tie has no nearest face and is refused rather than guessed
        assert "half-way" in str(exc)
        return
    assert grid.max_snap < s / 2
    assert grid.n == int(grid.active.sum())
    idx = grid.index[grid.active]
    assert sorted(idx.tolist()) == list(range(grid.n))


def test_aligned_spacing_hits_every_breakpoint():
    dom = build_window_rectangle(WaveguideParams(1.5, 1.2, 0.05), quarter=True)
    s = aligned_spacing(dom, 1 / 40)
    assert s <= 1 / 40
    assert discretize(dom, s).max_snap < 1e-12


# ----------------------------------------------------------------- assembly


@settings(max_examples=15, deadline=None)
@given(kL=st.integers(5, 20), kh=st.integers(1, 15), ke=st.integers(1, 9),
       quarter=st.booleans(), window=st.sampled_from([None, BC.NEUMANN, BC.DIRICHLET]))
def test_operator_bitwise_symmetric_with_nonnegative_diagonal(kL, kh, ke, quarter, window):
    # lattice parameters keep every breakpoint on a face at spacing 0.05
    L, h, eps = 0.2 * kL, 1 + 0.1 * kh, 0.1 * ke
    p = WaveguideParams(L, h, eps)
    dom = build_waveguide(p, L / 2 + 1.0, window_bc=window, quarter=quarter)
    grid = discretize(dom, 0.05)
    op = assemble_operator(dom, grid, lambda x, y: x * x + y * y)
    assert op.is_exactly_symmetric()
    assert (op.matrix - op.matrix.T).count_nonzero() == 0
    assert op.matrix.diagonal().min() >= 0


def test_neumann_kernel_is_constant():
    dom = build_rectangle((0, 1), (0, 0.5), BC.NEUMANN)
    grid = discretize(dom, 1 / 32)
    op = assemble_operator(dom, grid)
    r = op.matrix @ np.ones(op.n)
    assert np.abs(r).max() <= 1e-12 * abs(op.matrix).max()


def test_dirichlet_interval_matches_discrete_dispersion():
    # a strip one cell thick in y with Neumann top and bottom is the 1D chain
    n = 999
    s = 1 / n
    dom = build_rectangle((0, 1), (0, s), {"left": BC.DIRICHLET, "right": BC.DIRICHLET,
                                           "bottom": BC.NEUMANN, "top": BC.NEUMANN})
    lam = lowest(dom, s)[0]
    assert lam == pytest.approx((2 / s ** 2) * (1 - math.cos(math.pi * s)), rel=1e-10)


def test_dirichlet_rectangle_separates_exactly():
    s = 1 / 16
    lam = lowest(build_rectangle((0, 1), (0, 0.5), BC.DIRICHLET), s)[0]
    exact = sum((2 / s ** 2) * (1 - math.cos(math.pi * s / a)) for a in (1.0, 0.5))
    assert lam == pytest.approx(exact, rel=1e-12)


def test_rectangle_second_order():
    dom = build_rectangle((0, 1), (0, 1), BC.DIRICHLET)
    vals = [lowest(dom, s)[0] for s in (1 / 16, 1 / 32, 1 / 64)]
    order = math.log2((vals[0] - vals[1]) / (vals[1] - vals[2]))
    assert 1.8 <= order <= 2.2


def test_window_rectangle_closed_is_dirichlet_rectangle():
    for L, h in ((2.0, 2.0), (1.0, 1.0)):
        dom = build_window_rectangle(WaveguideParams(L, h, 0.0), quarter=True)
        lam = lowest(dom, 1 / 32)[0]
        assert lam == pytest.approx(math.pi ** 2 * (L ** -2 + h ** -2), rel=2e-3)


def test_neumann_windows_lower_eigenvalue():
    p = WaveguideParams(2.0, 1.2, 0.1)
    s = aligned_spacing(build_window_rectangle(p), 1 / 40)
    lam_n = lowest(build_window_rectangle(p, window_bc=BC.NEUMANN), s)[0]
    lam_d = lowest(build_window_rectangle(p, window_bc=BC.DIRICHLET), s)[0]
    assert lam_n < lam_d


def test_bc_bracketing_on_waveguide():
    p = WaveguideParams(3.0, 1.5, 0.4)
    s = 0.05
    open_ = lowest(build_waveguide(p, 2.0, quarter=True), s)[0]
    neu = lowest(build_waveguide(p, 2.0, window_bc=BC.NEUMANN, quarter=True), s)[0]
    dir_ = lowest(build_waveguide(p, 2.0, window_bc=BC.DIRICHLET, quarter=True), s)[0]
    assert neu <= open_ <= dir_


def test_quarter_domain_reproduces_full_ground_state():
    p = WaveguideParams(4.0, 2.0, 0.8)
    full = lowest(build_waveguide(p, 4.0), 0.05)[0]
    quarter = lowest(build_waveguide(p, 4.0, quarter=True), 0.05)[0]
    assert quarter == pytest.approx(full, rel=1e-10)


def test_potential_must_be_finite():
    dom = build_quarter_plane(2.0)
    grid = discretize(dom, 0.25)
    with pytest.raises(DomainError):
        assemble_operator(dom, grid, lambda x, y: np.where(x > 1, np.inf, 0.0))


def test_grid_domain_mismatch_rejected():
    a, b = build_quarter_plane(2.0), build_quarter_plane(3.0)
    with pytest.raises(DomainError):
        assemble_operator(a, discretize(b, 0.25))


def test_mass_weights_scale_kinetic_terms():
    dom = build_rectangle((0, 1), (0, 1), BC.DIRICHLET)
    grid = discretize(dom, 1 / 8)
    full = assemble_operator(dom, grid).matrix
    half = assemble_operator(dom, grid, mass_weights=(0.5, 0.5)).matrix
    assert abs(full - 2 * half).max() == 0


def test_operator_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("WGLAB_CACHE_DIR", str(tmp_path))
    dom = build_quarter_plane(2.0)
    grid = discretize(dom, 0.125)
    first = assemble_operator(dom, grid, lambda x, y: (x - y) ** 2, potential_id="diff")
    assert list(tmp_path.iterdir())
    second = assemble_operator(dom, grid, lambda x, y: (x - y) ** 2, potential_id="diff")
    assert (first.matrix != second.matrix).nnz == 0
    assert sp.isspmatrix_csr(second.matrix) or second.matrix.format == "csr"
