"""Height function, coefficient sets, and the similarity coordinate map."""

import math

import numpy as np
import pytest

from quadwave import geometry
from quadwave.errors import DomainError
from quadwave.jets import Jet, dk

SQRT2 = math.sqrt(2.0)


def test_height_at_half_is_minus_half():
    # the backward light cone of the blowup point crosses y = 1/2
    ev = geometry.eval_height(0.5)
    assert ev.h == -0.5


def test_height_algebraic_identity(rng):
    # (h+2)^2 = 2 + y^2, i.e. h^2 + 4h - y^2 + 2 = 0
    for y in rng.uniform(1e-3, 3.0, size=50):
        ev = geometry.eval_height(float(y))
        assert ev.h**2 + 4.0 * ev.h - y**2 + 2.0 == pytest.approx(0.0, abs=1e-13)


def test_height_derivatives_match_jets(rng):
    for y in rng.uniform(0.05, 1.5, size=20):
        y = float(y)
        ev = geometry.eval_height(y)
        f = lambda x: (x * x + 2.0).sqrt() - 2.0 if isinstance(x, Jet) else math.sqrt(x * x + 2.0) - 2.0
        assert ev.h == pytest.approx(f(y), rel=1e-14)
        assert ev.h1 == pytest.approx(dk(f, y, 1), rel=1e-12)
        assert ev.h2 == pytest.approx(dk(f, y, 2), rel=1e-12)


def test_coefficient_terms_match_eval(rng):
    for y in rng.uniform(0.05, 0.49, size=10):
        y = float(y)
        c11, c12, c20, c21, g00, V, w = geometry.coefficient_terms(y)
        cs = geometry.eval_coefficients(y)
        assert cs.c11 == pytest.approx(float(c11), rel=1e-13)
        assert cs.c12 == pytest.approx(float(c12), rel=1e-13)
        assert cs.c20 == pytest.approx(float(c20), rel=1e-13)
        assert cs.c21 == pytest.approx(float(c21), rel=1e-13)
        assert cs.g00_factor == pytest.approx(float(g00), rel=1e-13)
        assert cs.w == pytest.approx(float(w), rel=1e-13)
        assert cs.V == pytest.approx(float(V), rel=1e-13)


def test_principal_coefficient_vanishes_at_half():
    # y = 1/2 is the regular singular point of the mode equation
    assert geometry.eval_coefficients(0.5).c12 == 0.0


def test_nonlinearity_weight_closed_form(rng):
    # w = (y h' - h)^2 / (1 - h'^2)
    for y in rng.uniform(0.05, 0.49, size=20):
        y = float(y)
        ev = geometry.eval_height(y)
        w = (y * ev.h1 - ev.h) ** 2 / (1.0 - ev.h1**2)
        assert geometry.eval_coefficients(y).w == pytest.approx(w, rel=1e-13)


def test_origin_limits():
    org = geometry.eval_coefficients_origin(7)
    near = geometry.eval_coefficients(1e-9)
    h0sq = 6.0 - 4.0 * SQRT2
    assert org.c12 == pytest.approx(h0sq, rel=1e-14)
    assert org.w == pytest.approx(h0sq, rel=1e-14)
    assert org.c11_pole == pytest.approx(6.0 * h0sq, rel=1e-14)
    assert org.c20 == pytest.approx(-SQRT2 - 6.0 * (SQRT2 - 1.0), rel=1e-14)
    assert org.c21 == 0.0
    assert org.V == pytest.approx(112.0, rel=1e-14)
    assert near.c11 * 1e-9 == pytest.approx(org.c11_pole, rel=1e-6)
    assert near.c12 == pytest.approx(org.c12, rel=1e-8)
    assert near.c21 == pytest.approx(0.0, abs=1e-8)
    assert near.w == pytest.approx(org.w, rel=1e-8)
    assert near.V == pytest.approx(112.0, rel=1e-8)


def test_dimension_validation():
    for d in (5, 6, 8, 0, -7):
        with pytest.raises(DomainError):
            geometry.eval_coefficients(0.3, d=d)
        with pytest.raises(DomainError):
            geometry.eval_coefficients_origin(d)
    # odd d >= 7 is fine, the potential is profile-specific to d = 7
    assert geometry.eval_coefficients(0.3, d=9).V is None
    with pytest.raises(DomainError):
        geometry.eval_coefficients(-0.1)
    with pytest.raises(DomainError):
        geometry.eval_coefficients(0.0)


def test_map_invert_roundtrip(rng):
    for _ in range(40):
        T = float(rng.uniform(0.5, 2.0))
        s = float(rng.uniform(-0.5, 2.0))
        y = float(rng.uniform(0.02, 3.0))
        t, r = geometry.map_eta(T, s, y)
        s2, y2 = geometry.invert_eta(T, t, r)
        assert s2 == pytest.approx(s, abs=1e-11)
        assert y2 == pytest.approx(y, rel=1e-11)


def test_invert_on_axis():
    # r = 0: e^{-s}(2 - sqrt(2)) = T - t
    T, t = 1.0, 0.7
    s, y = geometry.invert_eta(T, t, 0.0)
    assert y == 0.0
    assert s == pytest.approx(math.log((2.0 - SQRT2) / (T - t)), rel=1e-12)
    with pytest.raises(DomainError):
        geometry.invert_eta(1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        geometry.invert_eta(1.0, 1.2, 0.0)


def test_invert_rejects_forward_cone():
    # slices never reach t - T >= r
    with pytest.raises(DomainError):
        geometry.invert_eta(1.0, 2.0, 0.5)
    # but do cover t slightly above T at large enough radius
    s, y = geometry.invert_eta(1.0, 1.1, 0.5)
    assert y > SQRT2
    t, r = geometry.map_eta(1.0, s, y)
    assert (t, r) == (pytest.approx(1.1), pytest.approx(0.5))


def test_omega_region_boundary():
    reg = geometry.OmegaRegion(1.0, 2.0)
    slope = geometry.eval_height(2.0).h / 2.0
    r = 1.3
    edge = 1.0 + slope * r
    assert reg.contains(edge - 1e-9, r)
    assert not reg.contains(edge + 1e-9, r)
    assert not reg.contains(-0.1, r)


def test_lambda_region_slab_and_cone():
    reg = geometry.LambdaRegion(0.4)
    assert reg.r0 == pytest.approx(0.1)
    assert reg.contains(0.2, 0.05)          # slab |t| <= t0
    assert reg.contains(-0.39, 0.0)
    assert reg.contains(0.5, 0.65)          # cone |t| <= r - r0
    assert not reg.contains(0.5, 0.3)
    assert not reg.contains(-0.6, 0.55)
