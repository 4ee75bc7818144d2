"""Three-term recurrence for the analytic-at-zero series of the Heun form.

The series coefficients obey a_{n+2} = A_n a_{n+1} + B_n a_n with a_{-1} = 0,
a_0 = 1, so r_0 = a_1/a_0 = A_{-1}.  Whether the ratio r_n = a_{n+1}/a_n tends
to 1 or to 5/8 decides analyticity at x = 1, and the quasisolution machinery
tracks r_n against an explicit approximant tilde_r_n.

Everything runs in exact rational arithmetic when lambda is rational (real or
complex); forward floating-point iteration always converges to the dominant
ratio and would silently destroy the delta-tracking claims.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ConvergenceError, DomainError
from ..polyalg import QComplex


def _lift(lam):
    """Classify lambda: exact (Fraction/QComplex) or binary64 complex."""
    if isinstance(lam, (int, Fraction)):
        return Fraction(lam), True
    if isinstance(lam, QComplex):
        return (lam.re if lam.im == 0 else lam), True
    return complex(lam), False


def heun_recurrence_coeffs(n: int, lam):
    """(A_n, B_n); exact when lambda is Fraction or QComplex.

    A_n = (3 lam^2 + 114 lam + 52 n^2 + 32 lam n + 348 n + 400) / (16(n+2)(2n+13))
    B_n = -5 (lam + 2n + 2)(lam + 2n + 8) / (16(n+2)(2n+13))
    """
    if n < -1:
        raise DomainError(f"recurrence index starts at -1, got {n}")
    lam, exact = _lift(lam)
    den = 16 * (n + 2) * (2 * n + 13)
    den = Fraction(den) if exact else float(den)
    A = (3 * lam * lam + 114 * lam + 52 * n * n + 32 * lam * n + 348 * n + 400) / den
    B = -5 * (lam + 2 * n + 2) * (lam + 2 * n + 8) / den
    return A, B


def quasisolution(n: int, lam, canonical: bool = False):
    """The quasisolution tilde_r_n; ``canonical`` drops the lower-order
    corrections 9/(4000 n^2) and -1/(13 n) (the variant that fails)."""
    if n < 1:
        raise DomainError(f"quasisolution needs n >= 1, got {n}")
    lam, exact = _lift(lam)

    def q(num, den):
        return Fraction(num, den) if exact else num / den

    c2 = q(3, 16 * (n + 1) * (2 * n + 11))
    c1 = q(16 * n + 41, 8 * (n + 1) * (2 * n + 11))
    if not canonical:
        c2 = c2 + q(9, 4000 * n * n)
        c1 = c1 - q(1, 13 * n)
    c0 = q(4 * n + 19, 4 * n + 22)
    return lam * lam * c2 + lam * c1 + c0


@dataclass(frozen=True)
class QuasiTriple:
    """One step of the ratio-vs-quasisolution comparison.

    Values are exact (Fraction or QComplex) when lambda is rational and
    binary64 otherwise; delta_n = r_n/tilde_r_n - 1 by construction.
    """

    n: int
    r: object
    tilde_r: object
    delta: object
    epsilon: object
    C: object


@dataclass(frozen=True)
class RecurrenceRun:
    lam: object
    a: tuple        # a_0 .. a_{n_max+1}
    r0: object      # = A_{-1}(lambda)
    triples: tuple  # QuasiTriple for 1 <= n <= n_max


def recurrence_a(lam, n_max: int):
    """Coefficients a_0 .. a_{n_max+1} by direct forward recurrence."""
    lam, exact = _lift(lam)
    one = Fraction(1) if exact else 1.0
    a = [one * 0, one]  # a_{-1}, a_0
    for n in range(-1, n_max):
        A, B = heun_recurrence_coeffs(n, lam)
        a.append(A * a[-1] + B * a[-2])
    return a[1:]


def run_recurrence(lam, n_max: int, canonical: bool = False) -> RecurrenceRun:
    """Exact ratios, quasisolution, and the delta/epsilon/C data for n <= n_max."""
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    lam, exact = _lift(lam)
    a = recurrence_a(lam, n_max + 1)
    for n, an in enumerate(a[:-1]):
        if an == 0:
            # impossible with a_0 = 1 per the analyticity argument
            raise ConvergenceError(f"a_{n} = 0 in the forward recurrence")
    r = [a[n + 1] / a[n] for n in range(n_max + 1)]
    tr = {n: quasisolution(n, lam, canonical) for n in range(1, n_max + 2)}
    triples = []
    for n in range(1, n_max + 1):
        A, B = heun_recurrence_coeffs(n, lam)
        eps = (A * tr[n] + B) / (tr[n] * tr[n + 1]) - 1
        C = B / (tr[n] * tr[n + 1])
        triples.append(QuasiTriple(n=n, r=r[n], tilde_r=tr[n],
                                   delta=r[n] / tr[n] - 1, epsilon=eps, C=C))
    return RecurrenceRun(lam=lam, a=tuple(a), r0=r[0], triples=tuple(triples))


def _abs2(x) -> float:
    if isinstance(x, QComplex):
        return float(x.abs2())
    if isinstance(x, Fraction):
        return float(x * x)
    return abs(x) ** 2


@dataclass(frozen=True)
class DeltaTrack:
    lam: object
    n_values: tuple
    delta_abs: tuple      # binary64 magnitudes, one per n
    max_delta: float
    exact_within_quarter: bool | None  # exact |delta|^2 <= 1/16 check, rational lam only


def track_delta(lam, n_max: int, canonical: bool = False) -> DeltaTrack:
    """max |delta_n| over 5 <= n <= n_max, exact arithmetic for rational lambda."""
    if n_max < 5:
        raise DomainError(f"delta tracking starts at n=5, need n_max >= 5")
    run = run_recurrence(lam, n_max, canonical)
    _, exact = _lift(lam)
    ns, mags = [], []
    exact_ok = True if exact else None
    for t in run.triples:
        if t.n < 5:
            continue
        ns.append(t.n)
        mags.append(math.sqrt(_abs2(t.delta)))
        if exact:
            d2 = t.delta.abs2() if isinstance(t.delta, QComplex) else t.delta * t.delta
            if d2 > Fraction(1, 16):
                exact_ok = False
    return DeltaTrack(lam=run.lam, n_values=tuple(ns), delta_abs=tuple(mags),
                      max_delta=max(mags), exact_within_quarter=exact_ok)


def delta_recurrence_residual(lam, n_max: int) -> float:
    """Max defect of delta_{n+1} = eps_n - C_n delta_n/(1+delta_n) over the run.

    Zero in exact arithmetic; serves as a consistency check between the
    definitional deltas and the recursive characterization.
    """
    run = run_recurrence(lam, n_max)
    worst = 0.0
    by_n = {t.n: t for t in run.triples}
    for n in range(1, n_max):
        t, s = by_n[n], by_n[n + 1]
        lhs = s.delta
        rhs = t.epsilon - t.C * t.delta / (1 + t.delta)
        worst = max(worst, math.sqrt(_abs2(lhs - rhs)))
    return worst


def companion_ratios(n_steps: int = 200):
    """Limiting ratios of the constant-coefficient model x_{n+2} = (13/8)x_{n+1} - (5/8)x_n.

    Forward iteration from a generic seed locks onto the dominant root 1;
    backward recurrence constructs the minimal solution, whose ratio is 5/8.
    Returns (forward_ratio, minimal_ratio).
    """
    A, B = Fraction(13, 8), Fraction(-5, 8)
    x0, x1 = Fraction(1), Fraction(2)
    for _ in range(n_steps):
        x0, x1 = x1, A * x1 + B * x0
    forward = x1 / x0
    # backward: x_n = (13 x_{n+1} - 8 x_{n+2}) / 5
    y = [Fraction(1), Fraction(0)]  # x_{N}, x_{N+1}
    for _ in range(n_steps):
        y.insert(0, (13 * y[0] - 8 * y[1]) / 5)
    minimal = y[n_steps // 2 + 1] / y[n_steps // 2]
    return float(forward), float(minimal)
