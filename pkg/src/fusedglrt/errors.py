"""Exception hierarchy shared by all modules."""


class FusedGLRTError(Exception):
    """Base class for every error raised by this package."""


class PoleError(FusedGLRTError, ValueError):
    """A gamma function was evaluated at one of its poles."""


class SeparabilityError(FusedGLRTError, ValueError):
    """The two pole families of a Mellin-Barnes integrand intersect."""


class UnsupportedClassError(FusedGLRTError):
    """No evaluation strategy applies to the requested parameters/argument."""


class NonConvergenceError(FusedGLRTError, ArithmeticError):
    """A series or quadrature failed to reach the requested tolerance.

    ``achieved`` holds the best relative error estimate that was reached.
    """

    def __init__(self, message, achieved=float("nan")):
        super().__init__(message)
        self.achieved = achieved


class DivergentIntegralError(FusedGLRTError, ValueError):
    """An integral identity was requested outside its convergence region."""


class ResonanceError(FusedGLRTError):
    """The H1 series coefficients hit a pole of Gamma(-k')."""


class DegenerateSampleError(FusedGLRTError, ZeroDivisionError):
    """The noise-subspace energy of an observation is exactly zero."""


class BracketError(FusedGLRTError):
    """Root bracketing failed while inverting a CDF."""


class ModelError(FusedGLRTError, ValueError):
    """A sensor model violates its structural invariants."""
