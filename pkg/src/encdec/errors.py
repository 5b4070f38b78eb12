"""Exception hierarchy shared by all modules."""


class EncDecError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EncDecError, ValueError):
    """A point lies outside the domain of a function."""


class ShapeError(EncDecError, ValueError):
    """Mismatched grids, vector lengths or dimensions."""


class ParameterError(EncDecError, ValueError):
    """A scalar parameter is out of its admissible range."""


class PreconditionError(EncDecError, ValueError):
    """An operation was applied to an input it is not defined on."""


class IllDefinedSamplingError(PreconditionError):
    """Point evaluation requested on an L2-tagged function."""


class CoveringError(EncDecError, ValueError):
    """A point set fails to be an epsilon-covering of its domain."""


class UnsupportedDimensionError(EncDecError, ValueError):
    pass


class ConfigurationError(EncDecError, ValueError):
    pass


class ConditioningError(EncDecError, ArithmeticError):
    """A least-squares or kernel system cannot be solved reliably."""


class DegenerateFrameError(EncDecError, ValueError):
    pass


class ConstructionError(EncDecError, ValueError):
    """A substitute atom set violates its proximity budget."""


class DiagnosticFailure(EncDecError):
    """A diagnostic search ended without finding a witness."""
