# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled mode-ODE integrator.

Mirror of modeode_py (adaptive Dormand-Prince 5(4) for the rho-variable mode
equations); keep the two implementations in lockstep.
"""

from quadwave.errors import ConvergenceError


cdef double _C[7]
cdef double _A[7][6]
cdef double _E[7]

_C[0] = 0.0; _C[1] = 1.0/5.0; _C[2] = 3.0/10.0; _C[3] = 4.0/5.0
_C[4] = 8.0/9.0; _C[5] = 1.0; _C[6] = 1.0

_A[1][0] = 1.0/5.0
_A[2][0] = 3.0/40.0;        _A[2][1] = 9.0/40.0
_A[3][0] = 44.0/45.0;       _A[3][1] = -56.0/15.0;      _A[3][2] = 32.0/9.0
_A[4][0] = 19372.0/6561.0;  _A[4][1] = -25360.0/2187.0
_A[4][2] = 64448.0/6561.0;  _A[4][3] = -212.0/729.0
_A[5][0] = 9017.0/3168.0;   _A[5][1] = -355.0/33.0
_A[5][2] = 46732.0/5247.0;  _A[5][3] = 49.0/176.0;      _A[5][4] = -5103.0/18656.0
_A[6][0] = 35.0/384.0;      _A[6][1] = 0.0
_A[6][2] = 500.0/1113.0;    _A[6][3] = 125.0/192.0
_A[6][4] = -2187.0/6784.0;  _A[6][5] = 11.0/84.0

_E[0] = 35.0/384.0 - 5179.0/57600.0
_E[1] = 0.0
_E[2] = 500.0/1113.0 - 7571.0/16695.0
_E[3] = 125.0/192.0 - 393.0/640.0
_E[4] = -2187.0/6784.0 + 92097.0/339200.0
_E[5] = 11.0/84.0 - 187.0/2100.0
_E[6] = -1.0/40.0


cdef inline void _rhs(int form, double complex lam, double x,
                      double complex u1, double complex u2,
                      double complex *d1, double complex *d2) noexcept:
    cdef double x2 = x * x
    cdef double q = 5.0 * x2 + 3.0
    cdef double V
    if form == 0:
        V = 48.0 * (21.0 - 5.0 * x2) / (q * q)
    elif form == 1:
        V = 18.0 * (5.0 * x2 * x2 + 30.0 * x2 - 3.0) / (x2 * q * q)
    else:
        V = 6.0 * (35.0 * x2 * x2 + 18.0 * x2 - 21.0) / (x2 * q * q)
    d1[0] = u2
    d2[0] = (-(6.0 / x - 2.0 * (lam + 3.0) * x) * u2
             + ((lam + 2.0) * (lam + 3.0) - V) * u1) / (1.0 - x2)


def integrate_mode_ode(int form, double complex lam, double x0, double x1,
                       double complex f0, double complex fp0,
                       double rtol=1e-12, double atol=1e-14,
                       long max_steps=1_000_000):
    """Integrate from x0 to x1; returns (f, f', accepted, rejected)."""
    cdef double x = x0
    cdef double complex u1 = f0, u2 = fp0
    cdef double span = x1 - x0
    if span == 0.0:
        return u1, u2, 0, 0
    cdef double direction = 1.0 if span > 0 else -1.0
    cdef double h = direction * min(abs(span), 1e-2)
    cdef double complex ks1[7]
    cdef double complex ks2[7]
    cdef double complex k1_1, k1_2, y1, y2, v1, v2, ce1, ce2
    cdef double e1, e2, sc1, sc2, err, fac
    cdef long naccept = 0, nreject = 0, it
    cdef int i, j
    _rhs(form, lam, x, u1, u2, &k1_1, &k1_2)
    for it in range(max_steps):
        if direction * (x + h - x1) > 0.0:
            h = x1 - x
        ks1[0] = k1_1; ks2[0] = k1_2
        for i in range(1, 7):
            y1 = u1
            y2 = u2
            for j in range(i):
                y1 = y1 + h * _A[i][j] * ks1[j]
                y2 = y2 + h * _A[i][j] * ks2[j]
            _rhs(form, lam, x + _C[i] * h, y1, y2, &ks1[i], &ks2[i])
        v1 = u1
        v2 = u2
        for j in range(6):
            v1 = v1 + h * _A[6][j] * ks1[j]
            v2 = v2 + h * _A[6][j] * ks2[j]
        ce1 = 0.0; ce2 = 0.0
        for j in range(7):
            ce1 = ce1 + _E[j] * ks1[j]
            ce2 = ce2 + _E[j] * ks2[j]
        e1 = abs(h * ce1); e2 = abs(h * ce2)
        sc1 = atol + rtol * max(abs(u1), abs(v1))
        sc2 = atol + rtol * max(abs(u2), abs(v2))
        err = (0.5 * ((e1 / sc1) ** 2 + (e2 / sc2) ** 2)) ** 0.5
        if err <= 1.0:
            x = x + h
            u1 = v1; u2 = v2
            k1_1 = ks1[6]; k1_2 = ks2[6]
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
