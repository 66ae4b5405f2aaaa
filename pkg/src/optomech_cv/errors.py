"""Exception and warning types shared across the package."""


class ParameterDomainError(ValueError):
    """A physical parameter is outside its allowed domain."""


class UnstableModelError(ValueError):
    """An operation that needs a Hurwitz drift matrix got an unstable model."""


class ConvergenceError(RuntimeError):
    """An iterative solver did not reach its tolerance.

    The achieved residual (or error estimate) is attached as ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class QuadratureError(ConvergenceError):
    """Adaptive integration stopped before meeting the error target."""


class ConfigError(ValueError):
    """A config file or sweep specification is invalid."""


class MultipleStableRootsWarning(UserWarning):
    """The static displacement equation has more than one stable solution.

    Carries the full list of real roots as ``roots``.
    """

    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = tuple(roots)


class BlockFormWarning(UserWarning):
    """The two-mode covariance block deviates noticeably from the ideal form."""


class PhysicalityWarning(UserWarning):
    """A computed covariance matrix slightly violates the Heisenberg bound."""
