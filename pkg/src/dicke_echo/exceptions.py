"""Exception and warning types raised across the package."""


class DickeError(Exception):
    """Base class for all package errors."""


class InvalidParameters(DickeError, ValueError):
    """A physical parameter violates its domain."""


class RegimeViolation(InvalidParameters):
    """The probe atom is not far enough detuned for the dispersive shift."""


class InvalidShift(InvalidParameters):
    """The shifted cavity frequency would be non-positive."""


class WrongPhase(DickeError, ValueError):
    """A phase-specific formula was requested outside its phase."""


class CriticalPoint(WrongPhase):
    """The coupling sits on the critical point where the closed forms diverge."""

    def __init__(self, g, g_c):
        self.g = g
        self.g_c = g_c
        super().__init__(
            f"g={g!r} is at the critical point g_c={g_c!r}; "
            "closed-form polariton results are undefined there"
        )


class CutoffTooSmall(DickeError, ValueError):
    """The photon cutoff cannot represent the requested Hamiltonian."""


class NoConvergence(DickeError, RuntimeError):
    """An iterative solve exhausted its budget.

    ``best_residual`` carries the smallest residual reached.
    """

    def __init__(self, message, best_residual=float("nan")):
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3e})")


class StepTooLarge(DickeError, RuntimeError):
    """The propagator could not meet its per-step error bound."""


class NearCriticalWarning(RuntimeWarning):
    """Lower polariton frequency is tiny; coefficients are ill-conditioned."""
