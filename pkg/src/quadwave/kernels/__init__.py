"""Backend selection for the mode-ODE integrator.

The compiled Cython kernel is preferred; the pure-Python twin is used when
the extension is unavailable or when QUADWAVE_PURE is set in the
environment.  `backend()` reports which one is active.
"""

from __future__ import annotations

import os

from ..errors import DomainError

if os.environ.get("QUADWAVE_PURE"):
    from . import modeode_py as _impl

    _BACKEND = "python"
else:
    try:
        from . import _modeode as _impl  # type: ignore[attr-defined]

        _BACKEND = "cython"
    except ImportError:
        from . import modeode_py as _impl

        _BACKEND = "python"


def backend() -> str:
    return _BACKEND


_FORM_IDS = {"rho": 0, "susy1": 1, "susy2": 2}


def integrate(form, lam, x0: float, x1: float, f0, fp0,
              rtol: float = 1e-12, atol: float = 1e-14):
    """Integrate a rho-variable mode ODE between interior points of (0, 1).

    ``form`` is a spectral.equations.Form (or its value string).
    Returns (f, fp, accepted_steps, rejected_steps).
    """
    key = getattr(form, "value", form)
    if key not in _FORM_IDS:
        raise DomainError(f"kernel supports rho-variable forms only, got {form}")
    for x in (x0, x1):
        if not 0.0 < x < 1.0:
            raise DomainError(f"integration endpoint {x} outside (0, 1)")
    return _impl.integrate_mode_ode(_FORM_IDS[key], complex(lam), x0, x1,
                                    complex(f0), complex(fp0), rtol, atol)
