"""Pure-Python mode-ODE integrator (fallback for the compiled kernel).

Integrates f'' = RHS(x, f, f') for the rho-variable mode equations with an
adaptive Dormand-Prince 5(4) pair.  The compiled extension `_modeode`
implements the identical algorithm; either backend must produce matching
trajectories to roundoff-level agreement.

Forms: 0 = RHO_FORM, 1 = SUSY1, 2 = SUSY2.
"""

from __future__ import annotations

from ..errors import ConvergenceError

# Dormand-Prince coefficients
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0),
)
_E = (  # b5 - b4
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
)


def _rhs(form: int, lam: complex, x: float, u1: complex, u2: complex):
    x2 = x * x
    q = 5.0 * x2 + 3.0
    if form == 0:
        V = 48.0 * (21.0 - 5.0 * x2) / (q * q)
    elif form == 1:
        V = 18.0 * (5.0 * x2 * x2 + 30.0 * x2 - 3.0) / (x2 * q * q)
    else:
        V = 6.0 * (35.0 * x2 * x2 + 18.0 * x2 - 21.0) / (x2 * q * q)
    d2 = (-(6.0 / x - 2.0 * (lam + 3.0) * x) * u2
          + ((lam + 2.0) * (lam + 3.0) - V) * u1) / (1.0 - x2)
    return u2, d2


def integrate_mode_ode(form: int, lam: complex, x0: float, x1: float,
                       f0: complex, fp0: complex,
                       rtol: float = 1e-12, atol: float = 1e-14,
                       max_steps: int = 1_000_000):
    """Integrate from x0 to x1; returns (f, f', accepted, rejected)."""
    x, u1, u2 = x0, complex(f0), complex(fp0)
    lam = complex(lam)
    span = x1 - x0
    if span == 0.0:
        return u1, u2, 0, 0
    direction = 1.0 if span > 0 else -1.0
    h = direction * min(abs(span), 1e-2)
    k1_1, k1_2 = _rhs(form, lam, x, u1, u2)
    naccept = nreject = 0
    ks1 = [0.0] * 7
    ks2 = [0.0] * 7
    for _ in range(max_steps):
        if direction * (x + h - x1) > 0.0:
            h = x1 - x
        ks1[0], ks2[0] = k1_1, k1_2
        for i in range(1, 7):
            a = _A[i]
            y1 = u1
            y2 = u2
            for j in range(i):
                y1 = y1 + h * a[j] * ks1[j]
                y2 = y2 + h * a[j] * ks2[j]
            ks1[i], ks2[i] = _rhs(form, lam, x + _C[i] * h, y1, y2)
        # stage 7 state is the 5th order solution (FSAL)
        v1 = u1
        v2 = u2
        a = _A[6]
        for j in range(6):
            v1 = v1 + h * a[j] * ks1[j]
            v2 = v2 + h * a[j] * ks2[j]
        e1 = e2 = 0.0
        for j in range(7):
            e1 += _E[j] * ks1[j]
            e2 += _E[j] * ks2[j]
        e1, e2 = abs(h * e1), abs(h * e2)
        sc1 = atol + rtol * max(abs(u1), abs(v1))
        sc2 = atol + rtol * max(abs(u2), abs(v2))
        err = (0.5 * ((e1 / sc1) ** 2 + (e2 / sc2) ** 2)) ** 0.5
        if err <= 1.0:
            x = x + h
            u1, u2 = v1, v2
            k1_1, k1_2 = ks1[6], ks2[6]
            naccept += 1
            if x == x1 or direction * (x1 - x) <= 1e-16 * abs(x1):
                return u1, u2, naccept, nreject
        else:
            nreject += 1
        fac = 0.9 * (err + 1e-300) ** -0.2
        h *= min(5.0, max(0.2, fac))
        if abs(h) < 1e-15 * abs(span):
            raise ConvergenceError(f"step size underflow at x={x}")
    raise ConvergenceError(f"no convergence within {max_steps} steps")
