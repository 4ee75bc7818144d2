"""Hyperboloidal similarity geometry.

The similarity coordinates (s, y) are anchored at a blowup point (T, 0) via

    t = T + exp(-s) h(y),    r = exp(-s) y,

with height function h(y) = sqrt(2 + y^2) - 2.  The slices interpolate
between the backward light cone (h(1/2) = -1/2) and spacelike hyperboloids.
This module evaluates h and the coefficient functions of the first-order
evolution system obtained in these coordinates, for odd spatial dimension
d >= 7 (the potential term V is specific to d = 7).

All expression helpers are generic: they accept floats, numpy arrays or
``jets.Jet`` values, so callers obtain analytic derivatives for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .jets import sqrt

SQRT2 = math.sqrt(2.0)


def _h(y):
    return sqrt(2.0 + y * y) - 2.0


def _h1(y):
    return y / sqrt(2.0 + y * y)


def _h2(y):
    s = sqrt(2.0 + y * y)
    return 2.0 / (s * s * s)


@dataclass(frozen=True)
class HeightEval:
    y: float
    h: float
    h1: float
    h2: float


def eval_height(y) -> HeightEval:
    """Height function and its first two derivatives at y >= 0."""
    if y < 0:
        raise DomainError(f"height function evaluated at y={y} < 0")
    return HeightEval(y=y, h=_h(y), h1=_h1(y), h2=_h2(y))


def coefficient_terms(y, d: int = 7):
    """Raw coefficient expressions at y > 0 (generic arithmetic).

    Returns (c11, c12, c20, c21, g00_factor, V, w); V is None unless d == 7.
    """
    h, h1, h2 = _h(y), _h1(y), _h2(y)
    omh2 = 1.0 - h1 * h1            # equals 2/(2+y^2) > 0
    yh = y * h1 - h                 # equals 2 - 2/sqrt(2+y^2) > 0
    c11 = (
        -(d - 1) / y * yh * h / omh2
        + (y * y - h * h) / omh2 * (y * h2) / yh
        + 2.0 * (h * h1 - y) / omh2
    )
    c12 = (h * h - y * y) / omh2
    c20 = (
        -1.0
        - (d - 1) / y * yh * h1 / omh2
        + (y * y - h * h) / omh2 * h2 / yh
    )
    c21 = 2.0 * (h * h1 - y) / omh2
    g00_factor = omh2 / (yh * yh)
    w = yh * yh / omh2
    V = None
    if d == 7:
        q = 5.0 * y * y + 3.0 * h * h
        V = 48.0 * (21.0 * h * h - 5.0 * y * y) / (q * q) * w
    return c11, c12, c20, c21, g00_factor, V, w


@dataclass(frozen=True)
class CoefficientSet:
    y: float
    d: int
    c11: float
    c12: float
    c20: float
    c21: float
    g00_factor: float
    w: float
    V: float | None


def eval_coefficients(y: float, d: int = 7) -> CoefficientSet:
    """Coefficient functions of the evolution system at a point y > 0."""
    _check_dim(d)
    if not y > 0:
        raise DomainError(f"coefficients require y > 0, got y={y}")
    c11, c12, c20, c21, g00, V, w = coefficient_terms(y, d)
    return CoefficientSet(y=y, d=d, c11=c11, c12=c12, c20=c20, c21=c21,
                          g00_factor=g00, w=w, V=V)


@dataclass(frozen=True)
class OriginCoefficients:
    """Limits at y = 0.

    c11 has a simple pole; ``c11_pole`` is the coefficient of 1/y.  For even
    data f the product c11 * f' stays finite (f'(y) ~ f''(0) y), which is why
    the pole coefficient is the only Laurent datum needed.
    """

    d: int
    c11_pole: float
    c12: float
    c20: float
    c21: float
    w: float
    V: float | None


def eval_coefficients_origin(d: int = 7) -> OriginCoefficients:
    _check_dim(d)
    h0sq = 6.0 - 4.0 * SQRT2        # h(0)^2
    return OriginCoefficients(
        d=d,
        c11_pole=(d - 1) * h0sq,
        c12=h0sq,
        c20=-SQRT2 - (d - 1) * (SQRT2 - 1.0),
        c21=0.0,
        w=h0sq,
        V=112.0 if d == 7 else None,
    )


def _check_dim(d: int) -> None:
    if d < 7 or d % 2 == 0:
        raise DomainError(f"dimension must be odd and >= 7, got d={d}")


def map_eta(T: float, s, y):
    """Similarity coordinates -> physical point (t, r)."""
    e = _exp(-s)
    return T + e * _h(y), e * y


def invert_eta(T: float, t: float, r: float) -> tuple[float, float]:
    """Inverse of map_eta for points below the slice family's envelope.

    Requires r >= 0 and (t - T) < r (slope h(y)/y < 1 for all y).
    """
    if r < 0:
        raise DomainError("r must be nonnegative")
    if r == 0:
        if t >= T:
            raise DomainError("points with r=0 need t < T")
        return math.log((2.0 - SQRT2) / (T - t)), 0.0
    m = (t - T) / r
    if m >= 1.0:
        raise DomainError(f"slope (t-T)/r = {m} is outside the chart")
    # solve h(y)/y = m; the ratio is strictly increasing on (0, inf)
    lo, hi = 1e-12, 4.0
    while _h(hi) / hi < m:
        hi *= 2.0
        if hi > 1e12:
            raise DomainError("failed to bracket the slope equation")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _h(mid) / mid < m:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * max(1.0, hi):
            break
    y = 0.5 * (lo + hi)
    return math.log(y / r), y


def _exp(x):
    if hasattr(x, "exp"):
        return x.exp()
    import numpy as np

    return np.exp(x)


@dataclass(frozen=True)
class OmegaRegion:
    """Spacetime region 0 <= t < T + (h(R)/R) r (boundaries excluded)."""

    T: float
    R: float

    def contains(self, t: float, r: float) -> bool:
        if r < 0:
            raise DomainError("r must be nonnegative")
        return 0.0 <= t < self.T + _h(self.R) / self.R * r


@dataclass(frozen=True)
class LambdaRegion:
    """Slab |t| <= t0 together with the interior cone |t| <= r - r0."""

    t0: float

    @property
    def r0(self) -> float:
        return self.t0 / 4.0

    def contains(self, t: float, r: float) -> bool:
        if r < 0:
            raise DomainError("r must be nonnegative")
        return abs(t) <= self.t0 or (-r + self.r0 <= t <= r - self.r0)
