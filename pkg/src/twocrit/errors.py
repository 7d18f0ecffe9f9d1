"""Exception types raised across the package."""


class DynamicsError(Exception):
    """Base class for all errors raised by twocrit."""


class ParameterError(DynamicsError, ValueError):
    """Invalid exponents or parameter value (e.g. t = 0, m < 2)."""


class UnsupportedCaseError(DynamicsError):
    """The operation is only implemented for a subset of exponent pairs."""


class PoleError(DynamicsError):
    """The requested quantity is undefined in the finite chart (pole or infinity)."""


class InfeasibleTrapError(DynamicsError):
    """No trap radius satisfies the safety bound for the requested margin."""

    def __init__(self, message, bracket):
        super().__init__(message)
        self.bracket = bracket


class NotInBasinError(DynamicsError):
    """The orbit of a seed did not reach the required basin within the budget."""


class BoettcherConvergenceError(DynamicsError):
    """The Böttcher product did not converge; ``partial`` holds the truncated value."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class DomainError(DynamicsError):
    """The parameter does not lie in the locus an operation requires."""


class UnderflowError(DynamicsError):
    """Floating point underflow made an estimate meaningless."""


class DegenerateInputError(DynamicsError, ValueError):
    """Zero or constant polynomial passed where positive degree is required."""


class SizeLimitError(DynamicsError):
    """Exact computation refused because the input exceeds the size guard."""
