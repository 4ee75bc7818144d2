"""Shared exception types."""


class QuadwaveError(Exception):
    """Base class for errors raised by this package."""


class DomainError(QuadwaveError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularPointError(DomainError):
    """Evaluation was requested at a singular point of an equation."""


class ResonanceError(QuadwaveError):
    """A Frobenius series seed hit a resonant index and cannot be built."""


class ConvergenceError(QuadwaveError):
    """An iterative procedure failed to reach its tolerance."""


class SpectralMismatchError(QuadwaveError):
    """A discrete eigenvalue is too far from its continuum target."""


class InconsistencyError(QuadwaveError):
    """A computed quantity contradicts a proven sign or identity."""


class TruncationWarning(UserWarning):
    """A truncated horizon or series leaves a non-negligible tail."""


class BlowupError(QuadwaveError):
    """The time stepper left the regime of finite solutions.

    Carries the last time ``s`` at which the state was still finite.
    """

    def __init__(self, s: float, message: str = ""):
        self.s = s
        super().__init__(message or f"solution left the finite regime at s={s:.6g}")
