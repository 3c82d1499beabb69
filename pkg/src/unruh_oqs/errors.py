"""Exception hierarchy shared by the numerical modules."""


class UnruhError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(UnruhError, ValueError):
    """A parameter lies outside the domain where the quantity is defined."""


class PositivityError(UnruhError, ValueError):
    """A matrix or state that must be positive semi-definite is not."""


class HermiticityError(UnruhError, ValueError):
    """A matrix that must be Hermitian (or anti-Hermitian) is not."""


class ShapeError(UnruhError, ValueError):
    pass


class ConvergenceError(UnruhError, RuntimeError):
    """A quadrature, extrapolation or integration failed to reach tolerance."""


class DegenerateSpectrumError(UnruhError, ArithmeticError):
    """The closed-form propagator is singular for these parameters.

    Raised when ``Omega**2 + 4*C**2`` vanishes; callers should fall back to
    :func:`unruh_oqs.ode_engine.expm`.
    """


class SingularGeneratorError(UnruhError, ArithmeticError):
    pass


class RankDeficiencyError(UnruhError, ArithmeticError):
    """The constrained stationary problem does not have a unique solution."""


class StepSizeError(ConvergenceError):
    """Adaptive step size underflowed or the step budget was exhausted."""
