"""Exception hierarchy shared by all descm modules."""


class DescmError(Exception):
    """Base class for every error raised by descm."""


class DomainError(DescmError, ValueError):
    """An argument lies outside the domain of a function (e.g. x <= 0)."""


class ParameterError(DescmError, ValueError):
    """An invalid parameter was supplied (negative scaling factor, bad map constants, ...)."""


class AssemblyError(DescmError):
    """The collocation matrices could not be built at some node."""


class NumericError(DescmError, ArithmeticError):
    """Non-finite values appeared in a matrix that must be finite."""


class UnderflowError(NumericError):
    """A diagonal entry of D underflowed; the map is saturated at the outermost nodes."""


class MetricError(DescmError, ZeroDivisionError):
    """An error metric is undefined (division by a zero reference value)."""


class InsufficientDataError(DescmError, ValueError):
    """Too few convergence records to evaluate a criterion."""


class ConfigError(DescmError, ValueError):
    """A study configuration could not be parsed or validated."""
