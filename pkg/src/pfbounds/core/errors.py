"""Exception hierarchy for pfbounds.

Every class also derives from the closest builtin so callers catching
``ValueError`` or ``RuntimeError`` keep working.
"""

from typing import Optional


class PfBoundsError(Exception):
    """Base class for all library errors."""


class DomainError(PfBoundsError, ValueError):
    """Input outside the mathematical domain of an operation."""


class KleConstructionError(PfBoundsError, RuntimeError):
    """Root bracketing failed while building a Karhunen-Loeve expansion."""

    def __init__(self, mode: int, message: str):
        super().__init__(f"mode {mode}: {message}")
        self.mode = mode


class EllipticityError(PfBoundsError, ValueError):
    """Diffusion coefficient is not positive at a quadrature point."""


class AssemblyError(PfBoundsError, RuntimeError):
    """The assembled stiffness matrix could not be factorized."""


class SingularityError(PfBoundsError, ZeroDivisionError):
    """A time step hits the pole of an implicit scheme."""


class GradientError(PfBoundsError, ArithmeticError):
    """A finite-difference stencil produced a non-finite value."""


class DegenerateGradientError(PfBoundsError, ArithmeticError):
    """The exact limit-state gradient vanishes."""


class PreconditionError(PfBoundsError, ValueError):
    """A documented precondition of an algorithm is violated."""


class StepSizeTooLargeError(PfBoundsError, ValueError):
    """The discretization parameter is too coarse for a bound to be valid."""

    def __init__(self, h: float, threshold: float):
        super().__init__(
            f"h too large for bound validity: h={h:.6g}, need h < {threshold:.6g}"
        )
        self.h = h
        self.threshold = threshold


class ConvergenceError(PfBoundsError, RuntimeError):
    """An iterative sampler failed to make progress."""


class FitError(PfBoundsError, ValueError):
    """Not enough usable points to fit a convergence order."""


class ExperimentStageError(PfBoundsError, RuntimeError):
    """Wraps an error raised while running one level of an experiment."""

    def __init__(self, level: Optional[int], stage: str, cause: Exception):
        where = "reference" if level is None else str(level)
        super().__init__(f"level={where} stage={stage}: {cause}")
        self.level = level
        self.stage = stage
        self.cause = cause
