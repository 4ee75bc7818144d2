"""Self-similar blowup analysis for the radial quadratic wave equation (d=7).

Subpackages and modules:

* geometry   - hyperboloidal similarity coordinates and PDE coefficients
* profiles   - closed-form blowup solutions, symmetry modes, eigenfunctions
* polyalg    - exact rational/polynomial layer and sign certificates
* spectral   - mode equations, Heun recurrence, certified bounds, eigenvalue scan
* resolvent  - Wronskians, second solutions, cutoff and projection integrals
* evolution  - collocation evolution of the nonlinear flow, Riesz filtering
* cli        - `quadwave` command line front end
"""

__version__ = "0.1.0"
