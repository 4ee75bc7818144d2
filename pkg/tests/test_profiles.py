"""Closed-form blowup profile and mode functions."""

import math
from fractions import Fraction

import numpy as np
import pytest

from quadwave import geometry, profiles
from quadwave.errors import DomainError
from quadwave.jets import Jet


def test_profile_constants_d7():
    pc = profiles.profile_constants(7)
    assert pc.d == 7
    assert pc.d0 == pytest.approx(6.0, rel=1e-15)
    assert pc.c1 == pytest.approx(504.0 / 25.0, rel=1e-15)
    assert pc.c2 == pytest.approx(24.0 / 5.0, rel=1e-15)
    assert pc.c3 == pytest.approx(3.0 / 5.0, rel=1e-15)
    assert pc.u0 == pytest.approx(56.0, rel=1e-14)
    assert pc.U(0.0) == pytest.approx(56.0, rel=1e-14)


def test_d0_closed_form():
    # d0 = sqrt(6 (d-1)(d-6)) at d = 7
    assert profiles.profile_constants(7).d0 == pytest.approx(math.sqrt(6.0 * 6.0 * 1.0))


def test_profile_constants_rejects_degenerate_dimension():
    # d0 = sqrt(6 (d-1)(d-6)) degenerates for d <= 6
    for d in (6, 5, 1):
        with pytest.raises(DomainError):
            profiles.profile_constants(d)
    assert profiles.profile_constants(9).d0 == pytest.approx(12.0, rel=1e-14)


def test_u_star_is_scaled_profile(rng):
    pc = profiles.profile_constants(7)
    for _ in range(30):
        T = float(rng.uniform(0.5, 2.0))
        t = float(rng.uniform(0.0, T - 0.05))
        r = float(rng.uniform(0.0, 2.0))
        tau = T - t
        assert profiles.u_star(T, t, r) == pytest.approx(pc.U(r / tau) / tau**2, rel=1e-13)


def test_u_star_matches_hyperboloidal_form(rng):
    for _ in range(30):
        s = float(rng.uniform(-0.5, 1.5))
        y = float(rng.uniform(0.02, 2.5))
        t, r = geometry.map_eta(1.0, s, y)
        assert profiles.u_star(1.0, t, r) == pytest.approx(profiles.u_star_hyp(s, y), rel=1e-12)


def test_ode_blowup_solves_comparison_ode(rng):
    # v(t) = 6/(T-t)^2 satisfies v'' = v^2 exactly
    for _ in range(20):
        T = float(rng.uniform(0.5, 2.0))
        t = float(rng.uniform(0.0, T - 0.1))
        j = profiles.ode_blowup(T, Jet.var(t, 2))
        assert j.derivative(2) == pytest.approx(j.value**2, rel=1e-12)


def test_wave_residual_accepts_exact_and_flags_wrong():
    u = lambda t, r: profiles.u_star(1.0, t, r)
    assert profiles.wave_residual(u, 0.3, 0.8) < 1e-11
    wrong = lambda t, r: profiles.u_star(1.0, t, r) * 1.01
    assert profiles.wave_residual(wrong, 0.3, 0.8) > 1e-4


def test_mode_pairs():
    for j in (1, 4):
        pair = profiles.eigenpair(j)
        for y in (0.1, 0.3, 0.49):
            assert pair.f2(y) == pytest.approx((j + 2) * pair.f1(y), rel=1e-14)
    with pytest.raises(DomainError):
        profiles.eigenpair(2)
    with pytest.raises(DomainError):
        profiles.F_mode(3, 1.0, 0.2, 0.5)


def test_mode_functions_solve_linearized_equation(rng):
    for j in (1, 4):
        F = lambda t, r, j=j: profiles.F_mode(j, 1.0, t, r)
        for _ in range(10):
            t = float(rng.uniform(0.0, 0.8))
            r = float(rng.uniform(0.05, 1.5))
            assert profiles.linearized_residual(F, t, r) < 1e-10


def test_time_translation_identity(rng):
    # dT u*_T = -432 F*_1
    for _ in range(25):
        t = float(rng.uniform(0.0, 0.8))
        r = float(rng.uniform(0.05, 2.0))
        dT = profiles.u_star(Jet.var(1.0, 1), t, r).derivative(1)
        assert dT == pytest.approx(-432.0 * profiles.F_mode(1, 1.0, t, r), rel=1e-12)


def test_rho_mode_exact_anchors():
    # similarity-variable modes normalized by the y-form pairs
    assert profiles.rho_mode(4, 1.0) == pytest.approx(1.0 / 512.0, rel=1e-14)
    assert profiles.rho_mode(4, 0.0) == pytest.approx(1.0 / 27.0, rel=1e-14)
    assert profiles.rho_mode(1, 0.0) == pytest.approx(7.0 / 27.0, rel=1e-14)


def test_residual_suite_reports_pass():
    report = profiles.residual_suite(seed=5, n_samples=60)
    assert report["pass"] is True
    assert report["seed"] == 5
    assert report["n_samples"] == 60
    assert len(report["checks"]) >= 10
    for name, check in report["checks"].items():
        assert check["pass"], name
        assert check["max_rel_residual"] <= check["tol"], name
