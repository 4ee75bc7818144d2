"""Eigenvalue localization for the rho-variable mode equation.

Analytic candidates are shot from both regular singular points: the index-0
Frobenius solution from the origin and the analytic (index-0) branch from
rho = 1.  An eigenvalue is a lambda where the two are linearly dependent, so
the normalized Wronskian at the midpoint is the mismatch functional whose
roots are sought.  On the real line the Wronskian is real and changes sign
at simple eigenvalues, which gives bracketing for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from ..errors import ResonanceError
from ..kernels import integrate
from . import equations as eq

MATCH_POINT = 0.5
# the rho=1 index pair is {0, 1-lam}; at lam=0 the index-0 recurrence hits the
# other exponent and the series seed degenerates, so that single grid point is
# displaced by a fixed nudge
RESONANCE_NUDGE = 1e-6


def _shoot(lam):
    x0, f0, fp0 = eq.rho_seed(lam, "origin")
    x1, g0, gp0 = eq.rho_seed(lam, "one")
    fL, fpL, _, _ = integrate(eq.Form.RHO_FORM, lam, x0, MATCH_POINT, f0, fp0)
    fR, fpR, _, _ = integrate(eq.Form.RHO_FORM, lam, x1, MATCH_POINT, g0, gp0)
    W = fL * fpR - fR * fpL
    scale = math.hypot(abs(fL), abs(fpL)) * math.hypot(abs(fR), abs(fpR))
    return W / scale


def mismatch(lam) -> float:
    """Magnitude of the normalized endpoint Wronskian; 0 iff lam is an eigenvalue."""
    try:
        return abs(_shoot(lam))
    except ResonanceError:
        return abs(_shoot(lam + RESONANCE_NUDGE))


def mismatch_signed(lam: float) -> float:
    """Signed mismatch for real lam (real seeds, real flow), for bracketing."""
    try:
        w = _shoot(float(lam))
    except ResonanceError:
        w = _shoot(float(lam) + RESONANCE_NUDGE)
    return w.real if isinstance(w, complex) else w


@dataclass(frozen=True)
class ScanResult:
    """Grid scan with localized roots.

    Every root carries its bracketing interval; on real scans these come
    from sign changes of the signed mismatch.
    """

    grid: tuple
    mismatch: tuple
    roots: tuple    # (root, lo, hi) triples
    errors: tuple   # (lambda, message) pairs


def scan_real(re_min: float = 0.25, re_max: float = 6.0, step: float = 0.05,
              refine: bool = True) -> ScanResult:
    """Scan a real lambda interval and localize eigenvalues by bracketing."""
    grid = []
    k = 0
    while True:
        lam = re_min + k * step
        if lam > re_max + 1e-12:
            break
        grid.append(lam)
        k += 1
    values, errors = [], []
    for lam in grid:
        try:
            values.append(mismatch_signed(lam))
        except Exception as exc:  # stiff-integration failure: per-lambda entry
            values.append(math.nan)
            errors.append((lam, str(exc)))
    roots = []
    if refine:
        for a, b, va, vb in zip(grid, grid[1:], values, values[1:]):
            if math.isnan(va) or math.isnan(vb) or va * vb > 0:
                continue
            root = brentq(mismatch_signed, a, b, xtol=1e-10, rtol=8.9e-16)
            roots.append((root, a, b))
    return ScanResult(grid=tuple(grid),
                      mismatch=tuple(abs(v) for v in values),
                      roots=tuple(roots), errors=tuple(errors))


def scan_strip(re_min: float = 0.0, re_max: float = 6.0, im_max: float = 3.0,
               re_step: float = 0.25, im_step: float = 0.5,
               exclusion_radius: float = 0.2):
    """Mismatch floor over a complex strip, excluding disks around 1 and 4.

    Returns (points, floor) where points is a list of (lambda, mismatch) and
    floor is the minimum mismatch over the grid outside the excluded disks.
    """
    points = []
    floor = math.inf
    n_re = int(round((re_max - re_min) / re_step))
    n_im = int(round(2 * im_max / im_step))
    for i in range(n_re + 1):
        re = re_min + i * re_step
        for j in range(n_im + 1):
            im = -im_max + j * im_step
            lam = complex(re, im)
            m = mismatch(lam)
            points.append((lam, m))
            if abs(lam - 1) > exclusion_radius and abs(lam - 4) > exclusion_radius:
                floor = min(floor, m)
    return points, floor
