import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wglab.domain_grid import DomainError, WaveguideParams
from wglab.one_particle import (PI2, Numerics, SignalBelowNoise, certificate_epsilon_threshold,
                                gadylshin_exponent, ground_energy_H1, lambda0_exact,
                                one_particle_unbound_certificate, symmetry_residuals,
                                waveguide_ground_state, window_rectangle_eigenvalue)

FAST = Numerics(spacing=1 / 20)


@pytest.mark.parametrize("L, h", [(1.5, 1.2), (2.0, 2.0), (1.0, 3.0)])
def test_closed_cavity_matches_analytic_lambda0(L, h):
    rep = window_rectangle_eigenvalue(WaveguideParams(L, h, 0.0))
    assert rep.notes["lambda0"] == pytest.approx(PI2 * (h ** -2 + L ** -2), rel=1e-15)
    assert rep.value == pytest.approx(lambda0_exact(L, h), rel=1e-6)


def test_small_window_stays_between_pi2_and_lambda0():
    rep = window_rectangle_eigenvalue(WaveguideParams(1.5, 1.2, 0.1))
    assert PI2 < rep.value < rep.notes["lambda0"]
    assert rep.notes["lambda0"] / PI2 == pytest.approx(1.5 ** -2 + 1.2 ** -2)


def test_window_eigenvalue_nonincreasing_in_eps():
    vals = [window_rectangle_eigenvalue(WaveguideParams(1.5, 1.2, e), FAST, spacing=0.0125).value
            for e in (0.0, 0.05, 0.1, 0.2, 0.4)]
    assert all(b <= a + 1e-8 for a, b in zip(vals, vals[1:]))


def test_gadylshin_exponent_is_two():
    fit = gadylshin_exponent(WaveguideParams(1.5, 1.2, 0.1), [0.2, 0.1, 0.05])
    assert 1.8 <= fit.slope <= 2.2
    assert all(d > 0 for d in fit.deltas)


def test_gadylshin_needs_two_points_and_halving():
    p = WaveguideParams(1.5, 1.2, 0.1)
    with pytest.raises(ValueError):
        gadylshin_exponent(p, [0.1])
    with pytest.raises(ValueError):
        gadylshin_exponent(p, [0.2, 0.15])


def test_signal_below_noise_names_smallest_usable_eps():
    # a one-level-apart ladder with a huge tolerance drowns every shift
    noisy = Numerics(spacing=1 / 20, levels=2, tol=1.0)
    with pytest.raises(SignalBelowNoise) as info:
        gadylshin_exponent(WaveguideParams(1.5, 1.2, 0.1), [0.2, 0.1], noisy)
    assert info.value.smallest_usable is None


def test_certificate_passes_in_small_window_regime():
    rep = one_particle_unbound_certificate(WaveguideParams(1.5, 1.2, 0.05))
    assert rep.status == "PASS"
    assert rep.notes["lambda_eps"] - PI2 > rep.notes["budget"]
    assert rep.value == PI2


@pytest.mark.parametrize("L, h", [(2.0, 2.0), (2.0, 1.2)])
def test_certificate_cannot_pass_when_cavity_too_large(L, h):
    assert lambda0_exact(L, h) < PI2
    rep = one_particle_unbound_certificate(WaveguideParams(L, h, 0.1), FAST)
    assert rep.status == "FAIL"
    assert rep.value < PI2


def test_large_window_at_reference_cavity():
    # at eps = 0.4 the cavity eigenvalue still clears pi^2 by far more than the budget
    rep = one_particle_unbound_certificate(WaveguideParams(1.5, 1.2, 0.4))
    assert rep.status == "PASS"
    assert rep.notes["lambda_eps"] - PI2 == pytest.approx(0.154, abs=5e-3)


def test_certificate_rejects_non_waveguide_regime():
    with pytest.raises(DomainError):
        one_particle_unbound_certificate(WaveguideParams(1.5, 0.9, 0.1))


def test_wide_open_cavity_binds():
    rep = ground_energy_H1(WaveguideParams(4.0, 2.0, 0.8), Numerics(spacing=0.1))
    assert rep.status == "BINDS"
    assert rep.value < PI2 - 6
    assert rep.notes["truncation_converged"]


def test_small_cavity_shows_no_binding():
    rep = ground_energy_H1(WaveguideParams(1.5, 1.2, 0.05), Numerics(spacing=1 / 20, max_truncation=4))
    assert rep.value >= PI2 - 1e-6
    assert rep.status.startswith("NO_BINDING")


def test_straight_strip_tends_to_pi2():
    vals = [ground_energy_H1(WaveguideParams(1.5, 1.2, 0.05), Numerics(spacing=1 / 10, truncation=X,
                                                                    max_truncation=X), straight=True).value
            for X in (4.0, 8.0)]
    assert vals[1] < vals[0]
    assert vals[1] - PI2 < 0.05
    assert vals[1] > PI2


@settings(max_examples=4, deadline=None)
@given(k=st.integers(2, 8))
def test_certificate_never_exceeds_full_energy(k):
    p = WaveguideParams(2.0, 1.5, 0.1 * k)
    s = 0.05
    cert = one_particle_unbound_certificate(p, Numerics(spacing=s), spacing=s)
    full = ground_energy_H1(p, Numerics(spacing=s, max_truncation=4))
    assert cert.value <= full.value + cert.error + full.error


def test_full_waveguide_eigenvector_is_even():
    state = waveguide_ground_state(WaveguideParams(4.0, 2.0, 0.8), 4.0, 0.05, quarter=False)
    rx, ry = symmetry_residuals(state)
    assert rx <= 1e-6 and ry <= 1e-6


def test_epsilon_threshold_brackets_pass_and_fail():
    thr = certificate_epsilon_threshold(1.5, 1.2, FAST)
    assert thr.epsilon is not None and thr.next_epsilon is not None
    assert thr.evaluated[thr.epsilon] == "PASS"
    assert thr.evaluated[thr.next_epsilon] != "PASS"
    assert thr.next_epsilon - thr.epsilon == pytest.approx(2 * 1.2 * thr.spacing)


def test_epsilon_threshold_none_when_lemma_condition_fails():
    thr = certificate_epsilon_threshold(2.0, 2.0, FAST)
    assert thr.epsilon is None


def test_numerics_validation():
    with pytest.raises(ValueError):
        Numerics(levels=1)
    with pytest.raises(ValueError):
        Numerics(spacing=0.0)
    assert Numerics(spacing=0.1, levels=3).ladder(0.1) == [0.1, 0.05, 0.025]
    assert math.isclose(lambda0_exact(1.0, 1.0), 2 * PI2)
