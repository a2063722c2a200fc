import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh

from wglab.oscillator1d import (boundary_decay_bound, check_boundary_decay, exact_oscillator,
                                fd_ground, ground_state, lambda_beta_convergence,
                                smallest_converged_beta, solve_truncated_oscillator)


@pytest.mark.parametrize("alpha, energy", [(1.0, math.sqrt(2)), (0.5, 1.0), (8.0, 4.0)])
def test_whole_line_energy(alpha, energy):
    e, c = exact_oscillator(alpha)
    assert e == pytest.approx(energy, rel=1e-15)
    assert c == pytest.approx(2 * energy, rel=1e-15)


@pytest.mark.parametrize("alpha", [0.0, -1.0])
def test_nonpositive_alpha_rejected(alpha):
    with pytest.raises(ValueError):
        exact_oscillator(alpha)


def test_gaussian_solves_the_ode_symbolically():
    w, a = sympy.symbols("w alpha", positive=True)
    c = 2 * sympy.sqrt(2 * a)
    phi = sympy.exp(-c * w ** 2 / 2)
    resid = -sympy.diff(phi, w, 2) / 2 + 4 * a * w ** 2 * phi - sympy.sqrt(2 * a) * phi
    assert sympy.simplify(resid) == 0


@pytest.mark.parametrize("alpha", [0.25, 1.0, 16.0])
def test_gaussian_residual_pointwise(alpha):
    energy, _ = exact_oscillator(alpha)
    phi = ground_state(alpha)
    w = np.linspace(-3, 3, 601)
    d = 1e-4
    second = (phi(w + d) - 2 * phi(w) + phi(w - d)) / d ** 2
    resid = -0.5 * second + 4 * alpha * w ** 2 * phi(w) - energy * phi(w)
    assert np.abs(resid).max() < 1e-5 * max(1.0, alpha)
    # unit L2 norm
    x = np.linspace(-10, 10, 20001)
    assert np.trapezoid(phi(x) ** 2, x) == pytest.approx(1.0, abs=1e-10)


def test_fd_ground_matches_dense_oracle():
    alpha, beta, s = 1.0, 2.0, 0.02
    lam, w, phi = fd_ground(alpha, beta, s)
    n = w.size
    k = 0.5 / s ** 2
    A = np.diag(2 * k + 4 * alpha * w ** 2) - k * (np.eye(n, k=1) + np.eye(n, k=-1))
    A[0, 0] -= k
    A[-1, -1] -= k
    assert lam == pytest.approx(eigh(A, eigvals_only=True)[0], rel=1e-12)
    assert np.sum(phi ** 2) * s == pytest.approx(1.0, rel=1e-12)


def test_beta_four_reaches_whole_line_energy():
    r = solve_truncated_oscillator(1.0, 4.0)
    assert abs(r.lambda_beta - math.sqrt(2)) <= 1e-6
    assert r.lambda_beta <= math.sqrt(2) + r.extrap_error


def test_short_interval_below_coarse_bound():
    r = solve_truncated_oscillator(1.0, 0.1)
    assert r.lambda_beta <= 4 * 0.1 ** 2
    assert r.boundary_value <= r.phi_beta.max()


def test_spacing_too_coarse_rejected():
    with pytest.raises(ValueError):
        solve_truncated_oscillator(1.0, 1.0, spacing=0.1)
    with pytest.raises(ValueError):
        solve_truncated_oscillator(1.0, -1.0)


@settings(max_examples=25, deadline=None)
@given(alpha=st.floats(0.05, 20.0), beta=st.floats(0.1, 5.0))
def test_eigenfunction_shape_and_energy_bounds(alpha, beta):
    r = solve_truncated_oscillator(alpha, beta)
    energy, _ = exact_oscillator(alpha)
    assert r.lambda_beta <= energy + r.extrap_error
    assert r.lambda_beta <= 4 * alpha * beta ** 2 + r.extrap_error
    phi = r.phi_beta
    assert np.abs(phi - phi[::-1]).max() <= 1e-8
    assert phi.min() >= -1e-8
    half = phi[phi.size // 2:]
    assert np.all(np.diff(half) <= 1e-8)


@settings(max_examples=15, deadline=None)
@given(alpha=st.floats(0.1, 10.0), beta=st.floats(0.2, 4.0))
def test_mass_tail_inequality(alpha, beta):
    r = solve_truncated_oscillator(alpha, beta)
    s = r.w[1] - r.w[0]
    lhs = 4 * alpha * r.boundary_value ** 2 * (2 * beta ** 3 / 3)
    rhs = np.sum(4 * alpha * r.w ** 2 * r.phi_beta ** 2) * s
    assert lhs <= rhs * (1 + 1e-6)


@pytest.mark.parametrize("alpha, beta, bound", [
    (1.0, 2.0, 2 ** -2.75 * math.sqrt(3)),
    (1.0, 1.0, 2 ** -1.25 * math.sqrt(3)),
    (16.0, 1.0, 2 ** -2.25 * math.sqrt(3)),
])
def test_boundary_decay_bound_holds(alpha, beta, bound):
    assert boundary_decay_bound(alpha, beta) == pytest.approx(bound, rel=1e-14)
    rep = check_boundary_decay(solve_truncated_oscillator(alpha, beta))
    assert rep.status == "HOLDS" and rep.margin >= 0


def test_convergence_table_gaps_shrink():
    rows = lambda_beta_convergence(1.0, [1.0, 2.0, 3.0, 4.0])
    gaps = [r.gap for r in rows]
    assert all(g >= -r.gap_error for g, r in zip(gaps, rows))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] <= 1e-6


def test_half_unit_interval_gap():
    r = solve_truncated_oscillator(1.0, 0.5)
    assert r.lambda_beta <= 1.0
    assert math.sqrt(2) - r.lambda_beta >= math.sqrt(2) - 1 - r.extrap_error


def test_convergence_table_validates_input():
    with pytest.raises(ValueError):
        lambda_beta_convergence(1.0, [1.0, 2.0])
    with pytest.raises(ValueError):
        lambda_beta_convergence(1.0, [1.0, 3.0, 2.0])


def test_smallest_converged_beta_is_consistent():
    r = smallest_converged_beta(1.0, tol=1e-8)
    assert r.gap < 1e-8
    prev = solve_truncated_oscillator(1.0, r.beta - 0.25)
    assert prev.gap >= 1e-8
