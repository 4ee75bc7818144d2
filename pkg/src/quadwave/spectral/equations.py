"""Mode equations of the linearized flow and their transformations.

The spectral analysis works with one second-order ODE written in several
equivalent forms:

* Y_FORM    - similarity variable y on (0, 1/2) u (1/2, R), coefficients
              from :mod:`quadwave.geometry`;
* RHO_FORM  - standard similarity variable rho on (0, 1), obtained from
              Y_FORM through rho = -y/h(y) and a conformal weight;
* SUSY1     - image of RHO_FORM under a first supersymmetric factorization
              that removes the eigenvalue 4;
* SUSY2     - image under a second factorization that removes eigenvalue 1;
* HEUN      - SUSY2 brought to Heun shape by the algebraic substitution
              x = 8 rho^2 / (3 + 5 rho^2).

Transforms are implemented on "jet functions": callables (x, order) -> Jet,
so derivative bookkeeping is automatic and works for closed forms and for
numerically integrated solutions alike.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import DomainError, ResonanceError, SingularPointError
from ..geometry import coefficient_terms
from ..jets import Jet


class Form(enum.Enum):
    Y_FORM = "y"
    RHO_FORM = "rho"
    SUSY1 = "susy1"
    SUSY2 = "susy2"
    HEUN = "heun"


_SINGULAR = {
    Form.Y_FORM: (0.0, 0.5),
    Form.RHO_FORM: (0.0, 1.0),
    Form.SUSY1: (0.0, 1.0),
    Form.SUSY2: (0.0, 1.0),
    Form.HEUN: (0.0, 1.0, 1.6),
}


def rho_potential(form: Form, rho):
    """Potential term of the rho-variable forms (generic arithmetic)."""
    r2 = rho * rho
    q = 5.0 * r2 + 3.0
    if form is Form.RHO_FORM:
        return 48.0 * (21.0 - 5.0 * r2) / (q * q)
    if form is Form.SUSY1:
        return 18.0 * (5.0 * r2 * r2 + 30.0 * r2 - 3.0) / (r2 * q * q)
    if form is Form.SUSY2:
        return 6.0 * (35.0 * r2 * r2 + 18.0 * r2 - 21.0) / (r2 * q * q)
    raise DomainError(f"{form} has no rho potential")


def mode_ode_coefficients(form: Form, lam, x):
    """Coefficients (p, q) of f'' + p f' + q f = 0 for the given form.

    Raises SingularPointError at the regular singular points when x is a
    plain number; jets evaluated there fail with a division error instead.
    """
    if isinstance(x, (int, float)) and any(
        abs(x - s) < 1e-14 for s in _SINGULAR[form]
    ):
        raise SingularPointError(f"{form.name} is singular at x={x}")
    if form is Form.Y_FORM:
        c11, c12, c20, c21, _, V, _ = coefficient_terms(x, 7)
        p = (c11 + (lam + 2.0) * c21) / c12
        q = ((lam + 2.0) * (c20 - lam - 2.0) + V) / c12
        return p, q
    if form in (Form.RHO_FORM, Form.SUSY1, Form.SUSY2):
        w = 1.0 - x * x
        p = (6.0 / x - 2.0 * (lam + 3.0) * x) / w
        q = -((lam + 2.0) * (lam + 3.0) - rho_potential(form, x)) / w
        return p, q
    # HEUN
    p = 11.0 / (2.0 * x) + lam / (x - 1.0) + 1.0 / (2.0 * (x - 1.6))
    q = (5.0 * (lam + 2.0) * (lam + 8.0) * x - (lam + 26.0) * (3.0 * lam + 4.0)) / (
        20.0 * x * (x - 1.0) * (x - 1.6)
    )
    return p, q


def residual_from_values(form: Form, lam, x, f, fp, fpp) -> float:
    """Relative residual of the form's ODE given (f, f', f'') at x."""
    p, q = mode_ode_coefficients(form, lam, x)
    terms = (fpp, p * fp, q * f)
    scale = sum(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale > 0 else 0.0


def y_form_residual(lam, f_expr, y: float) -> float:
    """Relative residual of the undivided y-form at y (jet derivatives).

    The undivided form c12 f'' + (c11 + (lam+2) c21) f' +
    ((lam+2)(c20 - lam - 2) + V) f is regular across y = 1/2.
    """
    F = f_expr(Jet.var(y, 2))
    f, fp, fpp = F.c[0], F.derivative(1), F.derivative(2)
    c11, c12, c20, c21, _, V, _ = coefficient_terms(y, 7)
    terms = (c12 * fpp, (c11 + (lam + 2.0) * c21) * fp,
             ((lam + 2.0) * (c20 - lam - 2.0) + V) * f)
    return abs(sum(terms)) / sum(abs(t) for t in terms)


def rho_form_residual(lam, f_expr, rho: float, form: Form = Form.RHO_FORM) -> float:
    """Relative residual of the undivided rho-variable ODE at rho in (0,1)."""
    F = f_expr(Jet.var(rho, 2))
    f, fp, fpp = F.c[0], F.derivative(1), F.derivative(2)
    terms = ((1.0 - rho * rho) * fpp,
             (6.0 / rho - 2.0 * (lam + 3.0) * rho) * fp,
             -((lam + 2.0) * (lam + 3.0) - rho_potential(form, rho)) * f)
    return abs(sum(terms)) / sum(abs(t) for t in terms)


# residues (p_{-1}, q_{-2}) of the Laurent expansions at each singular point
_INDICIAL = {
    (Form.RHO_FORM, 0.0): lambda lam: (6.0, 0.0),
    (Form.RHO_FORM, 1.0): lambda lam: (lam, 0.0),
    (Form.SUSY1, 0.0): lambda lam: (6.0, -6.0),
    (Form.SUSY1, 1.0): lambda lam: (lam, 0.0),
    (Form.SUSY2, 0.0): lambda lam: (6.0, -14.0),
    (Form.SUSY2, 1.0): lambda lam: (lam, 0.0),
    (Form.HEUN, 0.0): lambda lam: (5.5, 0.0),
    (Form.HEUN, 1.0): lambda lam: (lam, 0.0),
    (Form.HEUN, 1.6): lambda lam: (0.5, 0.0),
    (Form.Y_FORM, 0.0): lambda lam: (6.0, 0.0),
}


def frobenius_indices(form: Form, point: float, lam=0.0):
    """Indicial roots at a regular singular point, largest first."""
    key = (form, point)
    if key not in _INDICIAL:
        raise DomainError(f"{form.name} has no tabulated singular point {point}")
    p1, q2 = _INDICIAL[key](lam)
    # sigma (sigma - 1) + p1 sigma + q2 = 0
    b, c = p1 - 1.0, q2
    disc = (b * b - 4.0 * c) ** 0.5
    roots = ((-b + disc) / 2.0, (-b - disc) / 2.0)
    return tuple(sorted(roots, key=lambda z: -np.real(z)))


@dataclass(frozen=True)
class ModeEquation:
    form: Form
    lam: complex

    def coefficients(self, x):
        return mode_ode_coefficients(self.form, self.lam, x)

    def residual(self, x, f, fp, fpp) -> float:
        return residual_from_values(self.form, self.lam, x, f, fp, fpp)

    def singular_points(self):
        return _SINGULAR[self.form]

    def frobenius_indices(self, point: float):
        return frobenius_indices(self.form, point, self.lam)


# ----------------------------------------------------------------------
# Frobenius series seeds


def rho_form_polys(lam):
    """Polynomial-coefficient version of RHO_FORM: p2 f'' + p1 f' + p0 f = 0."""
    rho = Polynomial([0.0, 1.0])
    q = (5.0 * rho**2 + 3.0) ** 2
    p2 = rho * (1.0 - rho**2) * q
    p1 = (6.0 - 2.0 * (lam + 3.0) * rho**2) * q
    p0 = -rho * ((lam + 2.0) * (lam + 3.0) * q - 48.0 * (21.0 - 5.0 * rho**2))
    return p0, p1, p2


def frobenius_series(polys, nterms: int, c0=1.0):
    """Taylor coefficients of the analytic (largest-index-0) solution at 0.

    ``polys = (p0, p1, p2)`` are ascending coefficient arrays of
    p2 f'' + p1 f' + p0 f = 0 with a regular singular point at 0 whose
    analytic branch has index 0.  Raises ResonanceError if a resonant
    index makes the recurrence singular.
    """
    ps = [np.asarray(p.coef if isinstance(p, Polynomial) else p, dtype=complex)
          for p in polys]
    off = min(
        i - j for j, p in enumerate(ps) for i, v in enumerate(p) if v != 0
    )

    def ff(n, j):
        out = 1.0
        for i in range(j):
            out *= n - i
        return out

    c = np.zeros(nterms, dtype=complex)
    c[0] = c0
    for n in range(1, nterms):
        m = n + off
        if m < 0:
            continue
        mu = 0.0
        acc = 0.0
        for j, p in enumerate(ps):
            for i, v in enumerate(p):
                if v == 0:
                    continue
                k = m + j - i
                if k == n:
                    mu += v * ff(n, j)
                elif 0 <= k < n:
                    acc += v * ff(k, j) * c[k]
        if abs(mu) < 1e-13 * max(1.0, abs(acc)):
            raise ResonanceError(
                f"resonant Frobenius index at term {n} (multiplier {mu})"
            )
        c[n] = -acc / mu
    return c


def _series_eval(c, x):
    f = 0.0 + 0.0j
    fp = 0.0 + 0.0j
    for k in range(len(c) - 1, 0, -1):
        f = f * x + c[k]
        fp = fp * x + k * c[k]
    f = f * x + c[0]
    return f, fp


def rho_seed(lam, side: str, radius: float = 0.05, max_terms: int = 300):
    """Series-seeded Cauchy data for the RHO_FORM connection problem.

    side = "origin": the analytic branch at rho = 0, returned at rho = radius.
    side = "one":    the index-0 branch at rho = 1, returned at rho = 1 - radius.
    Returns (x, f, fp), normalized so the seed coefficient is 1.
    """
    p0, p1, p2 = rho_form_polys(lam)
    if side == "one":
        s = Polynomial([1.0, -1.0])  # rho = 1 - sigma
        p0, p1, p2 = p0(s), -p1(s), p2(s)
    elif side != "origin":
        raise DomainError(f"unknown side {side!r}")

    n = 40
    while True:
        c = frobenius_series((p0, p1, p2), n)
        tail = np.abs(c[-6:]) * radius ** np.arange(len(c) - 6, len(c))
        if np.all(tail <= 1e-18 * max(1.0, float(np.abs(c[0])))) or n >= max_terms:
            break
        n = min(2 * n, max_terms)
    f, fp = _series_eval(c, radius)
    if side == "one":
        return 1.0 - radius, f, -fp
    return radius, f, fp


# ----------------------------------------------------------------------
# coordinate maps between the forms


def rho_of_y(y):
    """Standard similarity variable: rho = -y/h(y), increasing on (0, 1/2]."""
    from ..jets import sqrt

    return -y / (sqrt(2.0 + y * y) - 2.0)


def y_of_rho(rho):
    from ..jets import sqrt

    return 2.0 * rho / (2.0 + sqrt(2.0 + 2.0 * rho * rho))


def conformal_weight(rho):
    """Weight Omega(rho) relating Y_FORM and RHO_FORM solutions.

    A RHO_FORM solution f and a Y_FORM solution F are linked by
    f(rho) = Omega(rho)^(lam+2) F(y(rho)), and Omega = -h(y(rho)).
    """
    from ..jets import sqrt

    return 2.0 / (2.0 + sqrt(2.0 + 2.0 * rho * rho))


def x_of_rho(rho):
    r2 = rho * rho
    return 8.0 * r2 / (3.0 + 5.0 * r2)


def rho_of_x(x):
    from ..jets import sqrt

    return sqrt(3.0 * x / (8.0 - 5.0 * x))


def heun_weight(x, lam):
    """SUSY2 solutions map to Heun solutions via y = fhat(rho(x)) / weight."""
    return x * (8.0 - 5.0 * x) ** ((lam + 2.0) / 2.0)


# ----------------------------------------------------------------------
# supersymmetric factorizations


def susy_b(rho):
    """Factorizing function of the first transform (log-derivative of the
    eigenvalue-4 ground state in the halved-measure representation)."""
    r2 = rho * rho
    return (9.0 - 36.0 * r2 - 5.0 * r2 * r2) / (rho * (3.0 + 2.0 * r2 - 5.0 * r2 * r2))


def susy_ground_first(rho):
    """Image of the eigenvalue-1 mode under the first transform."""
    q = 3.0 + 5.0 * rho * rho
    return -3.0 * rho / (q * q)


def _b2_jet(rho: float, order: int) -> Jet:
    """Second factorizer b2 = (log(rho^3 (1-rho^2)^(1/2) |f~_1|))'."""
    v = Jet.var(rho, order + 1)
    G = v**3 * (1.0 - v * v).sqrt() * susy_ground_first(v)
    return G.diff() / G.truncate(order)


def susy_b2(rho: float) -> float:
    return _b2_jet(rho, 0).value


def _check_rho(rho: float) -> None:
    if not 0.0 < rho < 1.0:
        raise DomainError(f"transforms live on (0, 1), got rho={rho}")


def susy_transform_first(f_jetfn, lam):
    """First factorization: maps RHO_FORM solutions to SUSY1 solutions.

    ``f_jetfn`` is a jet function (rho, order) -> Jet of the input solution;
    the result is a jet function one derivative shorter.  The transform is
    f -> rho^-3 (1-rho^2)^(1-lam/2) (g' - b g) with g = rho^3 (1-rho^2)^(lam/2) f.
    The outgoing weight carries the exponent (lam-2)/2, not lam/2; only with
    that shift does the image satisfy the partner equation for every lam.
    """

    def out(rho: float, order: int = 0) -> Jet:
        _check_rho(rho)
        v = Jet.var(rho, order + 1)
        a = v**3 * (1.0 - v * v) ** (lam / 2.0)
        b = susy_b(v)
        g = a * f_jetfn(rho, order + 1)
        gt = g.diff() - (b * g).truncate(order)
        w = Jet.var(rho, order)
        a_out = w**3 * (1.0 - w * w) ** (lam / 2.0 - 1.0)
        return gt / a_out

    return out


def susy_transform_second(f_jetfn, lam):
    """Second factorization: maps SUSY1 solutions to SUSY2 solutions.

    Same weights as the first transform; the factorizer b is replaced by the
    logarithmic derivative of the weighted image of the lam = 1 mode.
    """

    def out(rho: float, order: int = 0) -> Jet:
        _check_rho(rho)
        v = Jet.var(rho, order + 1)
        a = v**3 * (1.0 - v * v) ** (lam / 2.0)
        b2 = _b2_jet(rho, order + 1)
        g = a * f_jetfn(rho, order + 1)
        gt = g.diff() - (b2 * g).truncate(order)
        w = Jet.var(rho, order)
        a_out = w**3 * (1.0 - w * w) ** (lam / 2.0 - 1.0)
        return gt / a_out

    return out


def expr_jetfn(expr):
    """Wrap a closed-form generic expression as a jet function."""

    def fn(x: float, order: int = 0) -> Jet:
        return expr(Jet.var(x, order))

    return fn


def ode_jetfn(form: Form, lam, samples: dict):
    """Jet function for a numerically integrated solution.

    ``samples`` maps points x to Cauchy data (f, f'); higher Taylor
    coefficients are produced from the ODE itself, so a sampled solution can
    be pushed through the transforms with full derivative information.
    """

    def fn(x: float, order: int = 0) -> Jet:
        if x not in samples:
            raise DomainError(f"no stored sample at x={x}")
        f, fp = samples[x]
        c = [complex(f), complex(fp)] + [0.0] * max(0, order - 1)
        if order >= 2:
            v = Jet.var(x, order - 2)
            p, q = mode_ode_coefficients(form, lam, v)
            P = p.c if isinstance(p, Jet) else [p]
            Q = q.c if isinstance(q, Jet) else [q]
            for k in range(order - 1):
                # (k+2)(k+1) c_{k+2} = -sum_i P_i (k-i+1) c_{k-i+1} + Q_i c_{k-i}
                s = 0.0
                for i in range(k + 1):
                    s += P[i] * (k - i + 1) * c[k - i + 1] + Q[i] * c[k - i]
                c[k + 2] = -s / ((k + 2.0) * (k + 1.0))
        return Jet(c[: order + 1])

    return fn
