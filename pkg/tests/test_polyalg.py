"""Exact rational polynomial arithmetic and sign certificates."""

from fractions import Fraction

import pytest

from quadwave import polyalg
from quadwave.polyalg import BiPoly, QComplex, UniPoly
from quadwave.errors import DomainError


def test_qcomplex_exact_arithmetic():
    z = QComplex(Fraction(1, 2), Fraction(3))
    assert z.abs2() == Fraction(37, 4)
    assert z.conjugate() == QComplex(Fraction(1, 2), Fraction(-3))
    assert z * z.conjugate() == QComplex(Fraction(37, 4), Fraction(0))
    assert z + 1 == QComplex(Fraction(3, 2), Fraction(3))
    assert z * z == QComplex(Fraction(-35, 4), Fraction(3))
    w = QComplex(2, -1)
    assert (z / w) * w == z


def test_qcomplex_rejects_binary64_complex():
    # a lone float converts to an exact Fraction; a complex carries two
    # rounded parts at once and is refused
    with pytest.raises(TypeError):
        QComplex(1, 2) + 1j
    assert QComplex(0.5, 1) == QComplex(Fraction(1, 2), Fraction(1))
    assert QComplex(1, 2) + 0.5 == QComplex(Fraction(3, 2), Fraction(2))


def test_unipoly_divmod_and_structure():
    x = UniPoly.x("t")
    p = (x - 1) * (x - 2) * (x - 3)
    assert p.degree == 3
    assert p.lc == 1
    q, r = p.divmod(x - 2)
    assert r.is_zero()
    assert q * (x - 2) == p
    q2, r2 = p.divmod(x * x + 1)
    assert q2 * (x * x + 1) + r2 == p
    assert r2.degree < 2


def test_unipoly_shift_is_composition():
    x = UniPoly.x("t")
    p = 2 * x * x * x - x + 5
    shifted = p.shift(Fraction(3))
    for t in (Fraction(0), Fraction(1, 2), Fraction(-4)):
        assert shifted(t) == p(t + 3)


def test_unipoly_rejects_floats():
    x = UniPoly.x("t")
    with pytest.raises(TypeError):
        x + 0.5


def test_gcd_and_squarefree():
    x = UniPoly.x("t")
    g = polyalg.poly_gcd((x - 1) * (x - 2), (x - 2) * (x - 3))
    assert g == (x - 2).monic()
    parts = polyalg.yun_squarefree((x - 1) * (x - 1) * (x - 2))
    assert ((x - 1).monic(), 2) in parts
    assert ((x - 2).monic(), 1) in parts
    assert polyalg.odd_multiplicity_part((x - 1) * (x - 1) * (x - 2)) == (x - 2).monic()
    # multiplicity 3 counts as odd
    cube = (x - 1) * (x - 1) * (x - 1)
    odd = polyalg.odd_multiplicity_part(cube * (x - 2) * (x - 2))
    assert odd == (x - 1).monic()


def test_sturm_root_counts():
    x = UniPoly.x("t")
    p = (x - 1) * (x - 2) * (x - 3)
    assert polyalg.sturm_root_count(p, Fraction(0), Fraction(10)) == 3
    assert polyalg.sturm_root_count(p, Fraction(0), None) == 3
    assert polyalg.sturm_root_count(p, Fraction(3, 2), Fraction(5, 2)) == 1
    assert polyalg.sturm_root_count(x * x + 1, Fraction(-10), Fraction(10)) == 0
    with pytest.raises(DomainError):
        polyalg.sturm_root_count(p, Fraction(1), Fraction(10))


def test_cauchy_root_bound():
    x = UniPoly.x("t")
    p = (x - 1) * (x - 2) * (x - 3)
    bound = polyalg.cauchy_root_bound(p)
    assert bound >= 3
    assert polyalg.sturm_root_count(p, -bound, bound) == 3


def test_monomial_sign_certificate():
    x = UniPoly.x("t")
    c = polyalg.monomial_sign_certificate(-(x + 1) * (x + 1), "<=0", claim="negative square")
    assert c.proved
    assert c.status == "proved"
    assert c.method == "MONOMIAL_SIGN"
    assert c.wall_time_ms >= 0.0
    bad = polyalg.monomial_sign_certificate(x * x - 1, "<=0", claim="not all negative")
    assert not bad.proved
    assert bad.status == "failed"
    assert "t^2" in bad.witness


def test_sturm_halfline_certificate():
    x = UniPoly.x("u")
    good = polyalg.sturm_nonnegative_on_halfline((x - 1) * (x - 1), ">=0", claim="square")
    assert good.proved
    assert good.method == "STURM"
    bad = polyalg.sturm_nonnegative_on_halfline(x * x - 3 * x + 2, ">=0", claim="dips")
    assert not bad.proved
    assert "sign change" in bad.witness
    lo = Fraction(bad.witness.split("(")[1].split(",")[0])
    assert 1 <= lo <= 2    # the isolated counterexample interval sits between the roots


def test_certificate_json_round_trip():
    x = UniPoly.x("t")
    c = polyalg.monomial_sign_certificate(-x * x, "<=0", claim="demo")
    d = c.to_json()
    assert d["claim"] == "demo"
    assert d["method"] == "MONOMIAL_SIGN"
    assert d["status"] == "proved"


def test_bipoly_substitute_and_shift():
    n = BiPoly.var(("n", "lam"), "n")
    lam = BiPoly.var(("n", "lam"), "lam")
    p = n * n + 3 * lam - 2
    assert p.degree("n") == 2
    assert p.degree("lam") == 1
    assert polyalg.evaluate_exact(p, Fraction(2), Fraction(1)) == 5
    sub = p.substitute("n", Fraction(2))
    assert sub(Fraction(1)) == 5
    shifted = p.shift("n", Fraction(5))
    assert polyalg.evaluate_exact(shifted, Fraction(0), Fraction(1)) == \
        polyalg.evaluate_exact(p, Fraction(5), Fraction(1))
    assert polyalg.shift_variable(p, "n", Fraction(5)) == shifted
    coeffs = p.coefficients_in("n")
    assert len(coeffs) == 3
    assert coeffs[2](Fraction(7)) == 1


def test_modulus_square_on_imaginary_axis():
    lam = UniPoly.x("lam")
    # |it + 1|^2 = t^2 + 1
    m = polyalg.modulus_square_on_imaginary_axis(lam + 1)
    u = UniPoly.x("u")
    assert m == u + 1
    # |(it)^2 + 3it + 2|^2 = (2 - t^2)^2 + 9t^2 = u^2 + 5u + 4
    m2 = polyalg.modulus_square_on_imaginary_axis(lam * lam + 3 * lam + 2)
    assert m2 == u * u + 5 * u + 4
    # nonnegative on u >= 0 by construction
    cert = polyalg.sturm_nonnegative_on_halfline(m2, ">=0", claim="modulus square")
    assert cert.proved
