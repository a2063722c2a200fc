import math

import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from wglab.domain_grid import BC, assemble_operator, build_rectangle, discretize
from wglab.eigensolve import EigensolverError, lowest_eigenpairs, richardson_extrapolate


def chain(n):
    s = 1 / n
    main = np.full(n, 2.0)
    main[[0, -1]] = 3.0  # antisymmetric ghosts at both ends
    return sp.diags([main, -np.ones(n - 1), -np.ones(n - 1)], [0, 1, -1], format="csr") / s ** 2


def random_symmetric(seed, n):
    rng = np.random.default_rng(seed)
    B = sp.random(n, n, density=0.05, random_state=rng)
    A = B + B.T + sp.diags(rng.uniform(0, 1, n) + 2 * n * 0.05)
    return A.tocsr()


@pytest.mark.parametrize("method", ["dense", "shift-invert", "lobpcg"])
def test_dirichlet_chain_closed_form(method):
    n = 999
    s = 1 / n
    res = lowest_eigenpairs(chain(n), 1, tol=1e-6, method=method)
    assert res.converged and res.max_residual <= 1e-6
    assert res.ground == pytest.approx((2 / s ** 2) * (1 - math.cos(math.pi * s)), rel=1e-9)


def test_rectangle_degenerate_pair_reported_as_cluster():
    dom = build_rectangle((0, 1), (0, 1), BC.DIRICHLET)
    op = assemble_operator(dom, discretize(dom, 1 / 32))
    res = lowest_eigenpairs(op, 3, tol=1e-8)
    pi2 = math.pi ** 2
    assert res.eigenvalues == pytest.approx([2 * pi2, 5 * pi2, 5 * pi2], rel=5e-3)
    assert (1, 2) in res.clusters
    V = res.eigenvectors
    assert np.abs(V.T @ V - np.eye(3)).max() < 1e-8


def test_k_larger_than_n_rejected():
    with pytest.raises(ValueError):
        lowest_eigenpairs(chain(10), 11)


@pytest.mark.filterwarnings("ignore:Exited")
def test_iteration_budget_exhaustion_raises_with_residuals():
    A = chain(3000)
    with pytest.raises(EigensolverError) as info:
        lowest_eigenpairs(A, 1, tol=1e-12, method="lobpcg", max_iter=2)
    assert info.value.residuals is not None


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(20, 300), k=st.integers(1, 4))
def test_dense_oracle_equivalence(seed, n, k):
    A = random_symmetric(seed, n)
    ref = sla.eigh(A.toarray(), eigvals_only=True)[:k]
    for method in ("dense", "shift-invert"):
        res = lowest_eigenpairs(A, k, tol=1e-8, seed=seed, method=method)
        assert np.allclose(res.eigenvalues, ref, rtol=1e-10, atol=1e-10)
        assert np.all(np.diff(res.eigenvalues) >= 0)
        for lam, v, r in zip(res.eigenvalues, res.eigenvectors.T, res.residuals):
            assert abs(lam - v @ (A @ v)) <= r * np.linalg.norm(v) + 1e-12


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(20, 200))
def test_nonnegative_potential_never_lowers_eigenvalues(seed, n):
    A = random_symmetric(seed, n)
    rng = np.random.default_rng(seed + 1)
    P = sp.diags(rng.uniform(0, 3, n))
    a = lowest_eigenpairs(A, 3, tol=1e-8).eigenvalues
    b = lowest_eigenpairs(A + P, 3, tol=1e-8).eigenvalues
    assert np.all(b >= a - 1e-10)


def test_seed_determinism():
    dom = build_rectangle((0, 2), (0, 1), BC.DIRICHLET)
    op = assemble_operator(dom, discretize(dom, 1 / 40))
    r1 = lowest_eigenpairs(op, 2, seed=7, method="shift-invert")
    r2 = lowest_eigenpairs(op, 2, seed=7, method="shift-invert")
    assert np.array_equal(r1.eigenvalues, r2.eigenvalues)
    assert np.array_equal(r1.eigenvectors, r2.eigenvectors)
    assert r1.seed == 7


# ----------------------------------------------------------------- extrapolation


def test_richardson_textbook_example():
    rep = richardson_extrapolate([9.95, 9.89], [0.1, 0.05])
    assert rep.value == pytest.approx(9.87, abs=1e-12)


def test_constant_sequence_flags_undefined_order():
    rep = richardson_extrapolate([3.0, 3.0, 3.0], [0.4, 0.2, 0.1])
    assert rep.value == 3.0
    assert math.isnan(rep.observed_order) and rep.warning


def test_non_halving_spacings_rejected():
    with pytest.raises(ValueError):
        richardson_extrapolate([1.0, 2.0], [0.1, 0.06])
    with pytest.raises(ValueError):
        richardson_extrapolate([1.0], [0.1])


@given(a=st.floats(-5, 5), c=st.floats(0.1, 10), p=st.sampled_from([1, 2]))
def test_exact_power_law_is_recovered(a, c, p):
    s = [0.2, 0.1, 0.05]
    rep = richardson_extrapolate([a + c * x ** p for x in s], s, p)
    assert rep.value == pytest.approx(a, abs=1e-9 * (1 + abs(a) + c))
    assert rep.observed_order == pytest.approx(p, abs=1e-6)
    assert not rep.warning


def test_order_outside_band_is_warned_but_reported():
    s = [0.2, 0.1, 0.05]
    rep = richardson_extrapolate([1 + x for x in s], s, 2)
    assert rep.observed_order == pytest.approx(1.0)
    assert rep.warning


def test_rectangle_extrapolates_to_two_pi_squared():
    dom = build_rectangle((0, 1), (0, 1), BC.DIRICHLET)
    spacings = [1 / 64, 1 / 128, 1 / 256]
    vals = [lowest_eigenpairs(assemble_operator(dom, discretize(dom, s)), 1).ground for s in spacings]
    rep = richardson_extrapolate(vals, spacings)
    assert rep.value == pytest.approx(2 * math.pi ** 2, abs=1e-6)
    assert 1.8 <= rep.observed_order <= 2.2
