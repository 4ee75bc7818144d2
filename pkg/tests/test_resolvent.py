"""Fundamental systems, the projection coefficient, and spectral projectors."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from quadwave import evolution, profiles, resolvent
from quadwave.errors import DomainError, SpectralMismatchError
from quadwave.jets import Jet
from quadwave.spectral import equations as eq


@pytest.fixture(scope="module")
def fs1():
    return resolvent.fundamental_system(1)


@pytest.fixture(scope="module")
def fs4():
    return resolvent.fundamental_system(4)


def test_wronskian_matches_antiderivative():
    # W and exp(-I) are the same function; I absorbs the normalization
    for j, lam in ((1, 1.0), (4, 4.0)):
        for y in (0.08, 0.2, 0.45):
            ratio = math.exp(-resolvent.antiderivative_I(j, y)) / resolvent.wronskian_W(y, lam)
            assert ratio == pytest.approx(1.0, rel=1e-12)


def test_fundamental_pair_has_prescribed_wronskian(fs1, fs4):
    for j, fs in ((1, fs1), (4, fs4)):
        for y in (0.1, 0.35, 0.44):
            phi = profiles.eigenpair(j).f1(Jet.var(y, 1))
            psi = fs.psi_jet(y, 1)
            west = phi.value * psi.derivative(1) - phi.derivative(1) * psi.value
            assert west == pytest.approx(fs.wronskian(y), rel=1e-9)


def test_psi_solves_mode_equation(fs1, fs4):
    for j, fs in ((1, fs1), (4, fs4)):
        adapter = lambda vj, fs=fs: fs.psi_jet(vj.value, vj.order)
        for y in (0.1, 0.25, 0.44):
            assert eq.y_form_residual(float(j), adapter, y) < 1e-12


def test_psi_vanishes_at_reduction_base(fs1, fs4):
    assert fs1.psi(resolvent.REDUCTION_BASE) == 0.0
    assert fs4.psi(resolvent.REDUCTION_BASE) == 0.0


def test_psi_grid_evaluation_bounds():
    grid = np.linspace(0.05, 0.45, 9)
    for j in (1, 4):
        values, worst = resolvent.second_solution_psi(j, grid)
        assert np.all(np.isfinite(values))
        assert worst < 1e-2    # absolute quadrature estimate against O(1e6) values
    with pytest.raises(DomainError):
        resolvent.second_solution_psi(1, [0.6])


def test_psi_one_is_continuous_across_phi_zero(fs1):
    yz = brentq(profiles.eigenpair(1).f1, 0.3, 0.45)
    left = fs1.psi(yz - 1e-7)
    right = fs1.psi(yz + 1e-7)
    mid = fs1.psi(yz)
    assert left == pytest.approx(mid, rel=1e-5)
    assert right == pytest.approx(mid, rel=1e-5)


def test_psi_boundary_exponents(fs1, fs4):
    # index -5 at the origin for both; the outer singular point carries
    # (1/2-y)^{-3} for j = 4 and a logarithmic resonance for j = 1, whose
    # derivative grows like 1/(1/2-y)
    ys = np.geomspace(1e-3, 5e-3, 5)
    for fs in (fs1, fs4):
        slope = np.polyfit(np.log(ys), np.log(np.abs([fs.psi(v) for v in ys])), 1)[0]
        assert slope == pytest.approx(-5.0, abs=0.05)
    us = np.geomspace(1e-4, 1e-3, 5)
    edge4 = np.polyfit(np.log(us), np.log([abs(fs4.psi(0.5 - u)) for u in us]), 1)[0]
    assert edge4 == pytest.approx(-3.0, abs=0.05)
    edge1 = np.polyfit(np.log(us),
                       np.log([abs(fs1.psi_jet(0.5 - u, 1).derivative(1)) for u in us]), 1)[0]
    assert edge1 == pytest.approx(-1.0, abs=0.05)


def test_function_F_vanishes_like_y6_at_origin():
    t1a, t2a = resolvent.function_F_terms(1e-3)
    t1b, t2b = resolvent.function_F_terms(1e-2)
    # both terms individually scale like y^6
    assert math.log10(t1b / t1a) == pytest.approx(6.0, abs=0.05)
    assert math.log10(t2b / t2a) == pytest.approx(6.0, abs=0.05)
    assert abs(resolvent.function_F(1e-3)) < 1e-15
    assert abs(resolvent.function_F(1e-4)) < abs(resolvent.function_F(1e-3))


def test_function_F_positive_inside_bracket_negative_beyond():
    pr = resolvent.positivity_radius()
    assert 0.1 < pr < 0.2
    for y in np.linspace(1e-3, pr, 40):
        assert resolvent.function_F(float(y)) > 0.0
    # the safety margin keeps the bracket strictly inside the sign change
    assert resolvent.function_F(pr / 0.9 + 0.01) < 0.0
    assert resolvent.function_F(0.19) < 0.0


def test_smooth_step_profile():
    assert resolvent.smooth_step(-0.5) == 0.0
    assert resolvent.smooth_step(0.0) == 0.0
    assert resolvent.smooth_step(1.0) == 1.0
    assert resolvent.smooth_step(2.0) == 1.0
    xs = np.linspace(0.0, 1.0, 50)
    vals = [resolvent.smooth_step(float(x)) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    # flat to all orders at the endpoints
    assert resolvent.smooth_step(1e-4) < 1e-10
    assert 1.0 - resolvent.smooth_step(1.0 - 1e-4) < 1e-10


def test_cutoff_constants_geometry():
    spec = resolvent.cutoff_constants(0.4)
    assert spec.t0 == 0.4
    assert spec.r0 == pytest.approx(0.1)
    assert spec.support == pytest.approx(1.5 * spec.plateau)
    assert 0.0 < spec.plateau < spec.support < 0.5
    assert spec.chi(0.5 * spec.plateau) == 1.0
    assert spec.chi(spec.support + 1e-6) == 0.0
    mid = np.linspace(spec.plateau, spec.support, 30)
    vals = [spec.chi(float(x)) for x in mid]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    for bad in (0.0, 4.0 / 9.0, 0.5, -0.2):
        with pytest.raises(DomainError):
            resolvent.cutoff_constants(bad)


def test_projection_integral_positive():
    spec = resolvent.cutoff_constants(0.4)
    pc = resolvent.projection_integral(spec)
    assert pc.j == 4
    assert pc.value > 0.0
    assert pc.method == resolvent.ProjectionMethod.CLOSED_FORM_INTEGRAND
    assert pc.quadrature_error < abs(pc.value)


def test_projection_integral_gauss_cross_check():
    # fixed-order Gauss quadrature against the adaptive result
    spec = resolvent.cutoff_constants(0.4)
    pc = resolvent.projection_integral(spec)
    integrand = lambda y: spec.chi(y) * resolvent.function_F(y)
    for nodes in (300, 600):
        x, w = np.polynomial.legendre.leggauss(nodes)
        a, b = 1e-12, spec.support
        t = 0.5 * (b - a) * x + 0.5 * (b + a)
        val = 0.5 * (b - a) * float(np.dot(w, [integrand(v) for v in t]))
        assert val == pytest.approx(pc.value, rel=1e-10)


def test_obstruction_integrals_single_signed():
    for j in (1, 4):
        value, err = resolvent.obstruction_integral(j)
        assert value < 0.0
        assert abs(value) > 1e3 * err
    samples = [resolvent.obstruction_integrand(4, float(y))
               for y in np.linspace(0.01, 0.49, 200)]
    assert all(s < 0.0 for s in samples)


def test_mode_projector_biorthogonal(op64):
    mv = {1: op64.mode_vector(1), 4: op64.mode_vector(4)}
    proj = resolvent.mode_projector(op64.matrix, mv)
    assert proj.eigenvalues[1].real == pytest.approx(1.0, abs=1e-6)
    assert proj.eigenvalues[4].real == pytest.approx(4.0, abs=1e-6)
    for j in (1, 4):
        for k in (1, 4):
            expected = 1.0 if j == k else 0.0
            assert proj.amplitude(mv[k], j) == pytest.approx(expected, abs=1e-6)
    a1, a4 = proj.amplitudes(2.5 * mv[4] - 0.5 * mv[1])
    assert a1 == pytest.approx(-0.5, abs=1e-6)
    assert a4 == pytest.approx(2.5, abs=1e-6)


def test_mode_projector_rejects_wrong_matrix(op64):
    mv = {1: op64.mode_vector(1), 4: op64.mode_vector(4)}
    with pytest.raises(SpectralMismatchError):
        resolvent.mode_projector(op64.matrix + 10.0 * np.eye(2 * op64.grid.n), mv)


def test_riesz_amplitudes_accept_state_or_vector(op64):
    vec = 2.0 * op64.mode_vector(4)
    n = op64.grid.n
    state = evolution.State(0.0, vec[:n], vec[n:])
    assert resolvent.riesz_amplitudes(state, op64) == resolvent.riesz_amplitudes(vec, op64)
    a1, a4 = resolvent.riesz_amplitudes(vec, op64)
    assert a1 == pytest.approx(0.0, abs=1e-9)
    assert a4 == pytest.approx(2.0, abs=1e-9)


def test_contour_amplitudes_match_projector(op64):
    mv = {1: op64.mode_vector(1), 4: op64.mode_vector(4)}
    vec = 1.5 * mv[1] + 0.25 * mv[4]
    ca = resolvent.contour_amplitudes(op64.matrix, mv, vec)
    ra = resolvent.riesz_amplitudes(vec, op64)
    assert ca[0] == pytest.approx(ra[0], abs=1e-8)
    assert ca[1] == pytest.approx(ra[1], abs=1e-8)
