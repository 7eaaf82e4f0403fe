"""Exception hierarchy shared by all modules."""


class SpinCorrError(Exception):
    """Base class for errors raised by this package."""


class DomainError(SpinCorrError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularityError(SpinCorrError, ArithmeticError):
    """A characteristic number vanished, so the symbol map is not injective."""


class ResourceError(SpinCorrError, MemoryError):
    """A configured resource cap (e.g. the factorial table size) was exceeded."""


class QuadratureError(SpinCorrError, ArithmeticError):
    """Gauss-Legendre coefficients did not stabilise under node doubling."""


class IncommensurableError(SpinCorrError, ArithmeticError):
    """Exact addition of two square roots whose ratio is irrational."""


class ConfigError(SpinCorrError, ValueError):
    """A run configuration or JSON spec is malformed."""
