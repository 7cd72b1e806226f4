"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class BracketError(ValueError):
    """A root/boundary search was started without a valid bracket."""


class ConvergenceError(RuntimeError):
    """Quadrature did not reach the requested tolerance.

    Carries the best available estimate and the residual error bound so the
    caller can decide whether the result is still usable.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(f"{message} (estimate={estimate!r}, bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound
