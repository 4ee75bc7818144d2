"""Truncated Taylor arithmetic against closed-form derivatives."""

import math

import numpy as np
import pytest

from quadwave.jets import Jet, d1, dk


def test_var_and_const_structure():
    x = Jet.var(2.5, 4)
    assert x.value == 2.5
    assert x.order == 4
    assert x.derivative(1) == 1.0
    assert x.derivative(2) == 0.0
    c = Jet.const(7.0, 3)
    assert c.value == 7.0
    assert all(c.derivative(k) == 0.0 for k in range(1, 4))


def test_polynomial_arithmetic_matches_calculus():
    rng = np.random.default_rng(3)
    for _ in range(25):
        x0 = float(rng.uniform(-2.0, 2.0))
        x = Jet.var(x0, 5)
        p = x * x * x - 4.0 * x + 1.5
        assert math.isclose(p.value, x0**3 - 4.0 * x0 + 1.5, rel_tol=1e-14, abs_tol=1e-14)
        assert math.isclose(p.derivative(1), 3.0 * x0**2 - 4.0, rel_tol=1e-13, abs_tol=1e-13)
        assert math.isclose(p.derivative(2), 6.0 * x0, rel_tol=1e-13, abs_tol=1e-13)
        assert math.isclose(p.derivative(3), 6.0, rel_tol=1e-13)
        assert p.derivative(4) == pytest.approx(0.0, abs=1e-12)


def test_log_series_at_one():
    # d^k log(x) at 1 is (-1)^{k+1} (k-1)!
    j = Jet.var(1.0, 7).log()
    for k in range(1, 8):
        expected = (-1.0) ** (k + 1) * math.factorial(k - 1)
        assert j.derivative(k) == pytest.approx(expected, rel=1e-12)


def test_sqrt_derivatives_at_four():
    j = Jet.var(4.0, 5).sqrt()
    assert j.value == pytest.approx(2.0, rel=1e-15)
    coeff = 0.5
    power = 0.5
    for k in range(1, 6):
        power -= 1.0
        assert j.derivative(k) == pytest.approx(coeff * 4.0**power, rel=1e-12)
        coeff *= power


def test_division_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = Jet.var(float(rng.uniform(0.2, 3.0)), 6)
        f = x * x + 1.0
        g = x.sqrt() + 0.5
        h = (f / g) * g
        for k in range(7):
            assert h.derivative(k) == pytest.approx(f.derivative(k), rel=1e-11, abs=1e-11)


def test_integer_power_matches_repeated_product():
    x = Jet.var(1.7, 6)
    a = x**4
    b = x * x * x * x
    for k in range(7):
        assert a.derivative(k) == pytest.approx(b.derivative(k), rel=1e-12)


def test_fractional_power_matches_sqrt():
    x = Jet.var(2.3, 5)
    a = x**0.5
    b = x.sqrt()
    for k in range(6):
        assert a.derivative(k) == pytest.approx(b.derivative(k), rel=1e-11, abs=1e-13)


def test_exp_log_roundtrip():
    x = Jet.var(0.8, 6)
    f = x * x + 0.3
    g = f.exp().log()
    for k in range(7):
        assert g.derivative(k) == pytest.approx(f.derivative(k), rel=1e-11, abs=1e-11)


def test_compose_with_chain_rule():
    # f(g(x)) with f(u) = u^3 + 2u and g(x) = 1 + x^2 at x = 0.7
    x0 = 0.7
    inner = Jet.var(x0, 5)
    g = inner * inner + 1.0
    outer = Jet.var(g.value, 5)
    f = outer * outer * outer + 2.0 * outer
    composed = f.compose_with(g)

    def direct(x):
        u = 1.0 + x * x
        return u**3 + 2.0 * u

    for k in range(6):
        assert composed.derivative(k) == pytest.approx(dk(direct, x0, k), rel=1e-9)


def test_truncate_drops_high_orders():
    x = Jet.var(1.2, 6)
    f = (x * x + 1.0).sqrt()
    t = f.truncate(3)
    assert t.order == 3
    for k in range(4):
        assert t.derivative(k) == f.derivative(k)


def test_helper_derivatives():
    f = lambda x: x * (x * x - 2.0).exp() if isinstance(x, Jet) else x * math.exp(x * x - 2.0)
    x0 = 0.9
    h = 1e-5
    fd = (f(x0 + h) - f(x0 - h)) / (2.0 * h)
    assert d1(f, x0) == pytest.approx(fd, rel=1e-8)
    fd2 = (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / h**2
    assert dk(f, x0, 2) == pytest.approx(fd2, rel=1e-5)


def test_domain_errors():
    with pytest.raises(ValueError):
        Jet.var(-1.0, 3).log()
    with pytest.raises(ValueError):
        Jet.var(-4.0, 3).sqrt()
    with pytest.raises(ValueError):
        Jet.var(-2.0, 3) ** 0.5
    with pytest.raises(ZeroDivisionError):
        Jet.var(1.0, 3) / Jet.const(0.0, 3)
