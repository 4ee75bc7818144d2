"""Fundamental systems, cutoff data, and rank-one spectral projections.

For each point eigenvalue j in {1, 4} the mode ODE in the similarity
variable y has the explicit solution f*_{j,1}.  This module builds the
second solution by reduction of order, evaluates the closed-form Wronskian
W(y; lambda), and uses them for two computations that back the stability
argument:

* the obstruction integrals that rule out generalized eigenvectors (the
  j=4 integrand has a fixed sign, the j=1 integral is nonzero);
* the positivity of the projection coefficient of cutoff mode data, which
  is what makes truncated unstable-mode data usable as an adjustment term.

It also hosts the discrete Riesz projection: mode amplitudes (a1, a4) of a
grid state, read off through left eigenvectors of the discretized
generator, with a resolvent contour quadrature as an optional cross-check.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg
from scipy.integrate import quad
from scipy.optimize import brentq

from . import profiles
from .errors import (
    DomainError,
    InconsistencyError,
    SingularPointError,
    SpectralMismatchError,
)
from .geometry import coefficient_terms
from .jets import Jet

SQRT2 = math.sqrt(2.0)

# lower limit of the reduction-of-order integral; any interior point works
REDUCTION_BASE = 0.25


def _point(y):
    return y.c[0] if isinstance(y, Jet) else y


def _check_interior(y) -> None:
    v = _point(y)
    if v <= 0.0 or v >= 0.5:
        raise SingularPointError(
            f"fundamental systems live on (0, 1/2), got y={v}"
        )


def _check_mode(j: int) -> None:
    if j not in (1, 4):
        raise DomainError(f"point eigenvalues are 1 and 4, got {j}")


def _sqrt(x):
    return x.sqrt() if isinstance(x, Jet) else math.sqrt(x)


def wronskian_W(y, lam):
    """Wronskian profile W(y; lambda) of the mode ODE's connection pair.

    Normalized so that W(phi_j, psi_j) = W(y; j) exactly for the fundamental
    systems built here.  Accepts jets in y and complex lambda; for y > 0 all
    radicands are positive, so the fractional powers are single-valued.
    """
    _check_interior(y)
    s = _sqrt(y * y + 2.0)
    num = (y * y + 1.0) * (1.0 - 4.0 * y * y) ** (-lam) \
        * (3.0 * s - y + 4.0) ** (lam / 2.0) * (3.0 * s + y + 4.0) ** (lam / 2.0)
    return num / (y ** 6 * s * _sqrt(y * y + 2.0 * s + 3.0))


def antiderivative_I(j: int, y):
    """Closed-form antiderivative I_j of the first-order coefficient p_j.

    exp(-I_j) = W(.; j); the j=4 variant absorbs the two half-integer powers
    into (8y^2 + 24 sqrt(y^2+2) + 34)^2, their exact product.
    """
    _check_mode(j)
    _check_interior(y)
    s = _sqrt(y * y + 2.0)
    common = y ** 6 * s * _sqrt(y * y + 2.0 * s + 3.0) / (y * y + 1.0)
    if j == 1:
        arg = common * (1.0 - 4.0 * y * y) \
            / (_sqrt(3.0 * s - y + 4.0) * _sqrt(3.0 * s + y + 4.0))
    else:
        arg = common * (1.0 - 4.0 * y * y) ** 4 \
            / (8.0 * y * y + 24.0 * s + 34.0) ** 2
    return arg.log() if isinstance(arg, Jet) else math.log(arg)


# ----------------------------------------------------------------------
# second solutions by reduction of order


@functools.lru_cache(maxsize=None)
def _pole_data():
    """Laurent data of W(.;1)/phi_1^2 at the zero of f*_{1,1}.

    f*_{1,1} vanishes simply at y ~ 0.368 (an ordinary point of the ODE), so
    the reduction integrand has a double pole there.  Its 1/u residue
    vanishes identically: W' = -p W and phi'' = -p phi' at the zero cancel,
    which is what makes the finite-part integral the analytic continuation.
    Returns (y_zero, A, rest0) with A the pole strength and rest0 the value
    of the regularized integrand at the zero.
    """
    f1 = profiles.eigenpair(1).f1
    yz = brentq(f1, 0.3, 0.45, xtol=1e-15)
    p1, p2, p3 = f1(Jet.var(yz, 3)).c[1:]
    w0, w1, w2 = wronskian_W(Jet.var(yz, 2), 1.0).c
    A = w0 / p1 ** 2
    e1 = 2.0 * p2 / p1
    e2 = (p2 * p2 + 2.0 * p1 * p3) / p1 ** 2
    rest0 = (w2 - w1 * e1 + w0 * (e1 * e1 - e2)) / p1 ** 2
    return yz, A, rest0


def _reduction_integral(j: int, y: float):
    """Finite-part integral of W(.;j)/phi_j^2 from REDUCTION_BASE to y."""
    phi = profiles.eigenpair(j).f1
    if j == 4:
        val, err = quad(lambda t: wronskian_W(t, 4.0) / phi(t) ** 2,
                        REDUCTION_BASE, y, epsrel=1e-11, limit=300,
                        full_output=1)[:2]
        return val, err
    yz, A, rest0 = _pole_data()

    def rest(t):
        u = t - yz
        if abs(u) < 1e-6:
            return rest0
        return wronskian_W(t, 1.0) / phi(t) ** 2 - A / u ** 2

    lo, hi = min(REDUCTION_BASE, y), max(REDUCTION_BASE, y)
    pts = [yz] if lo < yz < hi else None
    val, err = quad(rest, REDUCTION_BASE, y, points=pts,
                    epsrel=1e-11, limit=300, full_output=1)[:2]
    closed = -A / (y - yz) + A / (REDUCTION_BASE - yz)
    return val + closed, err


def _antiderivative_jet(integrand: Jet, value: float) -> Jet:
    return Jet([value] + [integrand.c[k] / (k + 1.0)
                          for k in range(integrand.order + 1)])


def _psi_jet(j: int, y: float, order: int) -> Jet:
    pair = profiles.eigenpair(j)
    val, _ = _reduction_integral(j, y)
    if order == 0:
        return Jet([pair.f1(y) * val])
    E = wronskian_W(Jet.var(y, order - 1), float(j)) \
        / pair.f1(Jet.var(y, order - 1)) ** 2
    return pair.f1(Jet.var(y, order)) * _antiderivative_jet(E, val)


def second_solution_psi(j: int, y_grid):
    """Second solution psi_j on a grid interior to (0, 1/2).

    psi_j(y) = f*_{j,1}(y) * int_{1/4}^{y} W(t; j) / f*_{j,1}(t)^2 dt, the
    integral taken in the finite-part sense across the zero of f*_{1,1}.
    Returns (values, worst quadrature error estimate).
    """
    _check_mode(j)
    ys = np.atleast_1d(np.asarray(y_grid, dtype=float))
    out = np.empty_like(ys)
    worst = 0.0
    yz, A, _ = _pole_data() if j == 1 else (None, None, None)
    pair = profiles.eigenpair(j)
    for i, y in enumerate(ys):
        _check_interior(y)
        if j == 1 and abs(y - yz) < 1e-9:
            # limit value at the phi zero
            out[i] = -A * pair.f1(Jet.var(yz, 1)).derivative(1)
            continue
        val, err = _reduction_integral(j, y)
        out[i] = pair.f1(y) * val
        worst = max(worst, err)
    return out, worst


@dataclass(frozen=True)
class FundamentalSystem:
    """Solution pair (phi_j, psi_j) of the mode ODE at lambda = j."""

    j: int

    def phi(self, y):
        return profiles.eigenpair(self.j).f1(y)

    def psi(self, y: float) -> float:
        values, _ = second_solution_psi(self.j, [y])
        return float(values[0])

    def psi_jet(self, y: float, order: int) -> Jet:
        return _psi_jet(self.j, y, order)

    def antiderivative(self, y):
        return antiderivative_I(self.j, y)

    def wronskian(self, y):
        return wronskian_W(y, float(self.j))


def fundamental_system(j: int) -> FundamentalSystem:
    _check_mode(j)
    return FundamentalSystem(j=j)


# ----------------------------------------------------------------------
# the sign function F and the cutoff data


def function_F_terms(y: float):
    """The two constituents of F: the source term and the derivative term.

    Both vanish like y^6 at the origin (with leading coefficients of equal
    sign); F > 0 near 0 comes from their difference, not from either term.
    """
    _check_interior(y)
    v = Jet.var(y, 1)
    _, c12, c20, c21, _, _, _ = coefficient_terms(v, 7)
    phi = profiles.eigenpair(4).f1(v)
    W = wronskian_W(v, 4.0)
    source = c21.c[0] * phi.derivative(1) + (c20.c[0] - 12.0) * phi.c[0]
    term1 = phi.c[0] * source / (W.c[0] * c12.c[0])
    term2 = (c21 * phi * phi / (W * c12)).derivative(1)
    return term1, term2


def function_F(y: float) -> float:
    """Integrand of the projection coefficient for cutoff j=4 mode data."""
    term1, term2 = function_F_terms(y)
    return term1 - term2


@functools.lru_cache(maxsize=None)
def positivity_radius(safety: float = 0.9, n_scan: int = 512) -> float:
    """Empirical radius delta0 with F > 0 on (0, delta0).

    Scans for the first sign change of F (it sits near y = 0.169), refines
    by bisection, and keeps a safety margin below the root.
    """
    ys = np.linspace(1e-3, 0.4999, n_scan)
    prev = ys[0]
    for y in ys:
        if function_F(y) <= 0.0:
            root = brentq(function_F, prev, y, xtol=1e-12)
            return safety * root
        prev = y
    return safety * ys[-1]


def smooth_step(x: float) -> float:
    """Monotone C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    a = math.exp(-1.0 / x)
    return a / (a + math.exp(-1.0 / (1.0 - x)))


def cutoff_profile(plateau: float, support: float) -> Callable[[float], float]:
    """Smooth non-increasing bump: 1 on [0, plateau], 0 from support on."""
    if not 0.0 < plateau < support:
        raise DomainError("cutoff needs 0 < plateau < support")
    width = support - plateau

    def chi(y: float) -> float:
        return 1.0 - smooth_step((y - plateau) / width)

    return chi


@dataclass(frozen=True)
class CutoffSpec:
    """Geometry of the mode truncation for a given slab height t0."""

    t0: float
    r0: float
    s0: float
    y0: float
    delta0: float
    plateau: float
    support: float
    chi: Callable[[float], float] = field(repr=False)


def cutoff_constants(t0: float) -> CutoffSpec:
    """Cutoff data derived from the slab height t0.

    r0 = t0/4 fixes the innermost light cone; s0 places the starting slice
    so that the slice through (0, r0) reaches y = y0; y0 solves
    r - r0 = 1 + exp(-s0) h(exp(s0) r) at r = y0 exp(-s0).  The cutoff chi
    is 1 up to min(y0, delta0)/2 and vanishes from 3 min(y0, delta0)/4 on.
    """
    if not 0.0 < t0 < 4.0 / 9.0:
        raise DomainError(f"slab height must lie in (0, 4/9), got t0={t0}")
    r0 = t0 / 4.0
    s0 = math.log((4.0 - 2.0 * SQRT2) / (2.0 + r0))
    y0 = math.exp(s0) * ((4.0 + SQRT2) * r0 * r0 + 4.0 * (2.0 + SQRT2) * r0) \
        / (8.0 * (r0 + 2.0 + SQRT2))
    delta0 = positivity_radius()
    m = min(y0, delta0)
    plateau, support = 0.5 * m, 0.75 * m
    return CutoffSpec(t0=t0, r0=r0, s0=s0, y0=y0, delta0=delta0,
                      plateau=plateau, support=support,
                      chi=cutoff_profile(plateau, support))


class ProjectionMethod(enum.Enum):
    CLOSED_FORM_INTEGRAND = "closed-form-integrand"
    DISCRETE_LEFT_EIGENVECTOR = "discrete-left-eigenvector"


@dataclass(frozen=True)
class ProjectionCoefficient:
    j: int
    value: float
    quadrature_error: float
    method: ProjectionMethod

    @property
    def positive(self) -> bool:
        return self.value > 0.0


def projection_integral(spec: CutoffSpec) -> ProjectionCoefficient:
    """The scalar int_0^{1/2} chi F dy behind the nonvanishing projection.

    The integrand is supported in (0, spec.support) where F > 0, so the
    value must come out positive; a non-positive result is flagged as an
    inconsistency rather than returned.
    """

    def integrand(t: float) -> float:
        if t <= 0.0 or t >= spec.support:
            return 0.0
        return spec.chi(t) * function_F(t)

    value, err = quad(integrand, 0.0, spec.support, points=[spec.plateau],
                      epsabs=0.0, epsrel=1e-12, limit=200, full_output=1)[:2]
    if value <= 0.0:
        raise InconsistencyError(
            f"projection integral came out non-positive ({value:.3e}) "
            "although the integrand has fixed sign on the cutoff support"
        )
    return ProjectionCoefficient(j=4, value=value, quadrature_error=err,
                                 method=ProjectionMethod.CLOSED_FORM_INTEGRAND)


# ----------------------------------------------------------------------
# obstruction integrals against generalized eigenvectors


def obstruction_integrand(j: int, y: float) -> float:
    """Integrand phi_j G_j / (W(.;j) c12) of the rank-one obstruction.

    A generalized eigenvector at j would force its integral over (0, 1/2)
    to vanish; a fixed sign (j=4) or a nonzero value (j=1) rules that out.
    """
    _check_mode(j)
    _check_interior(y)
    v = Jet.var(y, 1)
    _, c12, c20, c21, _, _, _ = coefficient_terms(v, 7)
    phi = profiles.eigenpair(j).f1(v)
    G = c21.c[0] * phi.derivative(1) + (c20.c[0] - 4.0 - 2.0 * j) * phi.c[0]
    return phi.c[0] * G / (wronskian_W(y, float(j)) * c12.c[0])


def obstruction_integral(j: int):
    """Value and error estimate of the obstruction integral over (0, 1/2)."""
    _check_mode(j)
    val, err = quad(lambda t: obstruction_integrand(j, t), 0.0, 0.5,
                    epsabs=0.0, epsrel=1e-11, limit=300, full_output=1)[:2]
    return val, err


# ----------------------------------------------------------------------
# discrete Riesz projections


@dataclass
class ModeProjector:
    """Rank-one spectral readout for a discretized generator.

    Built from one eigendecomposition: for each j the discrete eigenvalue
    nearest j is selected, the right eigenvector is scaled to best match the
    sampled mode pair, and the matching left eigenvector is normalized to a
    biorthogonal pairing.  Amplitudes are then plain inner products.
    """

    eigenvalues: dict
    left: dict = field(repr=False)
    right: dict = field(repr=False)

    def amplitude(self, vec, j: int) -> float:
        return float(np.real(self.left[j].conj() @ np.asarray(vec)))

    def amplitudes(self, vec):
        return self.amplitude(vec, 1), self.amplitude(vec, 4)


def mode_projector(matrix, mode_vectors: dict, tol: float = 1e-3) -> ModeProjector:
    """Eigen-analysis of a discretized generator reduced to the modes 1, 4.

    ``mode_vectors`` maps j to the sampled stacked mode pair on the grid.
    Raises SpectralMismatchError when the nearest discrete eigenvalue sits
    farther than ``tol`` from its continuum target.
    """
    w, vl, vr = scipy.linalg.eig(np.asarray(matrix), left=True, right=True)
    eigenvalues, left, right = {}, {}, {}
    for j in (1, 4):
        k = int(np.argmin(np.abs(w - j)))
        if abs(w[k] - j) > tol:
            raise SpectralMismatchError(
                f"nearest discrete eigenvalue to {j} is {w[k]:.8g} "
                f"(off by {abs(w[k] - j):.3g}, tolerance {tol:g})"
            )
        f = np.asarray(mode_vectors[j], dtype=complex)
        v = vr[:, k]
        v = v * ((v.conj() @ f) / (v.conj() @ v))
        u = vl[:, k]
        u = u / np.conj(u.conj() @ v)
        eigenvalues[j], left[j], right[j] = complex(w[k]), u, v
    return ModeProjector(eigenvalues=eigenvalues, left=left, right=right)


def riesz_amplitudes(state, operator):
    """Mode amplitudes (a1, a4) of a state under a discretized generator.

    ``operator`` is either a ModeProjector or any object with a
    ``projector()`` factory (the evolution module's discrete operator).
    ``state`` is either a stacked vector or an object with phi1/phi2.
    """
    proj = operator if isinstance(operator, ModeProjector) else operator.projector()
    if hasattr(state, "phi1"):
        vec = np.concatenate([np.asarray(state.phi1), np.asarray(state.phi2)])
    else:
        vec = np.asarray(state)
    return proj.amplitudes(vec)


def contour_amplitudes(matrix, mode_vectors: dict, vec, n_nodes: int = 24,
                       radius: float = 0.5):
    """Cross-check of riesz_amplitudes by resolvent contour quadrature.

    Trapezoid quadrature of (2 pi i)^-1 times the resolvent around circles
    of the given radius centered at 1 and 4; spectrally accurate in n_nodes
    since the integrand is analytic and periodic in the angle.
    """
    m = np.asarray(matrix, dtype=complex)
    ident = np.eye(m.shape[0], dtype=complex)
    vec = np.asarray(vec, dtype=complex)
    out = []
    for j in (1, 4):
        acc = np.zeros_like(vec)
        for k in range(n_nodes):
            z = j + radius * np.exp(2j * np.pi * k / n_nodes)
            acc += np.linalg.solve(z * ident - m, vec) * (z - j)
        p = acc / n_nodes
        f = np.asarray(mode_vectors[j], dtype=complex)
        out.append(float(np.real((f.conj() @ p) / (f.conj() @ f))))
    return tuple(out)
