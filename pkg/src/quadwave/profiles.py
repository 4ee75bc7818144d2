"""Closed-form blowup profiles and mode functions.

Everything here is an explicit solution of the radial quadratic wave
equation

    (d_t^2 - d_r^2 - (6/r) d_r) u = u^2        (d = 7)

or of its linearization / mode equations.  ``residual_suite`` plugs each
closed form back into its defining equation at random sample points with
jet-computed derivatives and reports the worst relative residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import DomainError
from .jets import Jet, sqrt

# d = 7 profile constants
C1 = 504.0 / 25.0
C2 = 24.0 / 5.0
C3 = 3.0 / 5.0


@dataclass(frozen=True)
class ProfileConstants:
    d: int
    d0: float
    c1: float
    c2: float
    c3: float

    def U(self, rho):
        """Self-similar profile U(rho) = (c1 - c2 rho^2) / (c3 + rho^2)^2."""
        q = self.c3 + rho * rho
        return (self.c1 - self.c2 * rho * rho) / (q * q)

    @property
    def u0(self) -> float:
        return self.c1 / self.c3**2


def profile_constants(d: int = 7) -> ProfileConstants:
    if d < 7:
        raise DomainError(f"profile constants need d >= 7, got {d}")
    d0 = math.sqrt(6.0 * (d - 1) * (d - 6))
    c1 = 4.0 / 25.0 * ((3 * d - 8) * d0 + 8 * d * d - 56 * d + 48)
    c2 = 4.0 / 5.0 * d0
    c3 = (3 * d - 18 + d0) / 15.0
    return ProfileConstants(d=d, d0=d0, c1=c1, c2=c2, c3=c3)


def ode_blowup(T, t):
    """Spatially homogeneous blowup 6/(T-t)^2."""
    tau = T - t
    return 6.0 / (tau * tau)


def u_star(T, t, r):
    """Self-similar blowup solution for d = 7, singular only at (T, 0)."""
    tau = T - t
    q = r * r + C3 * tau * tau
    return (C1 * tau * tau - C2 * r * r) / (q * q)


def u_star_hyp(s, y):
    """u_star(1, .) composed with the similarity map, as a function of (s, y)."""
    h = sqrt(2.0 + y * y) - 2.0
    e2s = _exp(2.0 * s)
    q = 3.0 * h * h + 5.0 * y * y
    return 24.0 * e2s * (21.0 * h * h - 5.0 * y * y) / (q * q)


def F_mode(k: int, T, t, r):
    """Solutions of the linearized equation generating the symmetry modes.

    k=1 is the blowup-time derivative direction (d_T u_star = -432 F_1),
    k=4 is the gauge mode with similarity weight exp(6 s).
    """
    tau = T - t
    q = 5.0 * r * r + 3.0 * tau * tau
    if k == 1:
        return tau * (7.0 * tau * tau - 15.0 * r * r) / (q * q * q)
    if k == 4:
        return 1.0 / (q * q * q)
    raise DomainError(f"mode index must be 1 or 4, got {k}")


@dataclass(frozen=True)
class ModePair:
    """Eigenfunction of the linearized similarity generator, eigenvalue j."""

    j: int

    def f1(self, y):
        h = sqrt(2.0 + y * y) - 2.0
        q = 5.0 * y * y + 3.0 * h * h
        if self.j == 1:
            return (7.0 * h * h - 15.0 * y * y) * h / (q * q * q)
        return 1.0 / (q * q * q)

    def f2(self, y):
        return (self.j + 2.0) * self.f1(y)


def eigenpair(j: int) -> ModePair:
    if j not in (1, 4):
        raise DomainError(f"point eigenvalues are 1 and 4, got {j}")
    return ModePair(j=j)


def rho_mode(j: int, rho):
    """Analytic mode-equation solutions in the standard similarity variable."""
    if j not in (1, 4):
        raise DomainError(f"point eigenvalues are 1 and 4, got {j}")
    q = 5.0 * rho * rho + 3.0
    if j == 1:
        return (7.0 - 15.0 * rho * rho) / (q * q * q)
    return 1.0 / (q * q * q)


def _exp(x):
    if hasattr(x, "exp"):
        return x.exp()
    return np.exp(x)


# ----------------------------------------------------------------------
# residual checks


def wave_residual(u_fn, t: float, r: float) -> float:
    """Relative residual of u_tt - u_rr - (6/r) u_r - u^2 at (t, r), r > 0."""
    ut = u_fn(Jet.var(t, 2), r)
    ur = u_fn(t, Jet.var(r, 2))
    u, u_tt = ut.value, ut.derivative(2)
    u_r, u_rr = ur.derivative(1), ur.derivative(2)
    terms = (u_tt, -u_rr, -6.0 * u_r / r, -u * u)
    return abs(sum(terms)) / sum(abs(x) for x in terms)


def linearized_residual(F_fn, t: float, r: float) -> float:
    """Relative residual of F_tt - F_rr - (6/r) F_r = 2 u_star F."""
    Ft = F_fn(Jet.var(t, 2), r)
    Fr = F_fn(t, Jet.var(r, 2))
    F, F_tt = Ft.value, Ft.derivative(2)
    F_r, F_rr = Fr.derivative(1), Fr.derivative(2)
    terms = (F_tt, -F_rr, -6.0 * F_r / r, -2.0 * u_star(1.0, t, r) * F)
    return abs(sum(terms)) / sum(abs(x) for x in terms)


def _sample_omega(rng, n: int, T: float = 1.0, R: float = 2.0):
    """Random points of the region 0 <= t < T + (h(R)/R) r, away from (T, 0)."""
    slope = (math.sqrt(2.0 + R * R) - 2.0) / R
    pts = []
    while len(pts) < n:
        r = rng.uniform(0.05, 3.0)
        t = rng.uniform(0.0, T + slope * r)
        if math.hypot(t - T, r) >= 0.05:
            pts.append((t, r))
    return pts


def residual_suite(seed: int = 0, n_samples: int = 200) -> dict:
    """Plug every closed form into its defining equation at random points.

    Returns a JSON-friendly report; ``report["pass"]`` is the conjunction of
    the individual checks.
    """
    from .spectral import equations

    rng = np.random.default_rng(seed)
    checks = {}

    def record(name, values, tol):
        worst = float(max(values))
        checks[name] = {"max_rel_residual": worst, "tol": tol, "pass": worst <= tol}

    pts = _sample_omega(rng, n_samples)
    record("u_star_wave", [wave_residual(lambda t, r: u_star(1.0, t, r), t, r)
                           for t, r in pts], 1e-9)

    # homogeneous blowup: closed-form second derivative, exact identity
    taus = rng.uniform(0.1, 5.0, size=n_samples)
    record("ode_blowup", [
        abs(36.0 / tau**4 - ode_blowup(0.0, -tau) ** 2) / (36.0 / tau**4)
        for tau in taus], 1e-12)

    for k in (1, 4):
        record(f"F{k}_linearized",
               [linearized_residual(lambda t, r, k=k: F_mode(k, 1.0, t, r), t, r)
                for t, r in pts], 1e-8)

    # d_T u_star = -432 F_1
    vals = []
    for t, r in pts:
        dT = u_star(Jet.var(1.0, 1), t, r).derivative(1)
        ref = -432.0 * F_mode(1, 1.0, t, r)
        vals.append(abs(dT - ref) / max(abs(dT), abs(ref)))
    record("dT_identity", vals, 1e-10)

    ys = np.concatenate([rng.uniform(0.01, 0.49, n_samples // 2),
                         rng.uniform(0.51, 1.5, n_samples // 2)])
    for j in (1, 4):
        pair = eigenpair(j)
        record(f"mode_y_form_j{j}",
               [equations.y_form_residual(j, pair.f1, y) for y in ys], 1e-8)

    rhos = rng.uniform(0.01, 0.99, n_samples)
    for j in (1, 4):
        record(f"mode_rho_form_j{j}",
               [equations.rho_form_residual(j, lambda x, j=j: rho_mode(j, x), rho)
                for rho in rhos], 1e-8)

    # composition with the similarity map
    svals = rng.uniform(-1.0, 1.0, n_samples)
    yvals = rng.uniform(1e-3, 1.5, n_samples)
    comp_u, comp_f4, comp_f1 = [], [], []
    for s, y in zip(svals, yvals):
        t, r = geometry.map_eta(1.0, s, y)
        a, b = u_star_hyp(s, y), u_star(1.0, t, r)
        comp_u.append(abs(a - b) / max(abs(a), abs(b)))
        a, b = F_mode(4, 1.0, t, r), math.exp(6.0 * s) * eigenpair(4).f1(y)
        comp_f4.append(abs(a - b) / max(abs(a), abs(b)))
        a, b = F_mode(1, 1.0, t, r), -math.exp(3.0 * s) * eigenpair(1).f1(y)
        comp_f1.append(abs(a - b) / max(abs(a), abs(b), 1e-300))
    record("u_star_hyp_composition", comp_u, 1e-10)
    record("F4_similarity_weight", comp_f4, 1e-10)
    record("F1_similarity_weight", comp_f1, 1e-10)

    return {
        "seed": seed,
        "n_samples": n_samples,
        "checks": checks,
        "pass": all(c["pass"] for c in checks.values()),
    }
