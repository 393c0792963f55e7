"""Exception types shared across the package."""


class FockLaserError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FockLaserError, ValueError):
    """A physical parameter or precondition was violated."""


class SupportRuleError(ValidationError):
    """Fock truncation too small to hold the displaced states it is used with."""


class PrecisionLossError(FockLaserError, ArithmeticError):
    """A numerical routine cannot meet the requested accuracy."""


class TruncationError(FockLaserError):
    """A state lost more norm to the truncation boundary than allowed."""


class TailMassError(FockLaserError):
    """A photon distribution carries non-negligible weight at the grid edge."""


class ScanLimitError(FockLaserError):
    """A scan hit its ceiling without finding the requested feature."""


class ConvergenceError(FockLaserError):
    """An iterative solver failed to converge."""


class MemoryBudgetError(FockLaserError):
    """A requested computation would exceed the declared memory budget."""


class DegenerateSteadyStateError(FockLaserError):
    """The Liouvillian null space appears to be more than one-dimensional."""
