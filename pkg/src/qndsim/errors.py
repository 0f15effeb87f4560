"""Exception types: parameter domain, state domain, data sufficiency, numerics."""


class ParameterError(ValueError):
    """A physical parameter or argument lies outside its allowed domain."""


class StateDomainError(ValueError):
    """A Gaussian state violates its positivity requirements."""


class InsufficientDataError(ValueError):
    """Too few samples for the requested inference."""


class DegenerateSeriesError(ValueError):
    """A sample series carries no usable variation."""


class NumericalFailureError(ArithmeticError):
    """A computation produced non-finite values."""


class ConfigError(ValueError):
    """A run configuration is missing, malformed, or inconsistent."""
