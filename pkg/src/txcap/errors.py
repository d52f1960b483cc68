"""Semantic exception types shared across the toolkit."""


class TxcapError(Exception):
    """Base class for all toolkit errors."""


class DomainError(TxcapError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BracketError(TxcapError):
    """A root bracket does not enclose a sign change."""


class QuadratureError(TxcapError):
    """Adaptive quadrature failed to converge.

    Carries the best available estimate in ``estimate`` so callers can
    decide whether the partial result is usable.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (partial estimate {estimate!r}, error {error!r})")
        self.estimate = estimate
        self.error = error


class DegenerateThresholdError(TxcapError):
    """A scheduling threshold leaves zero transmission probability."""


class ValidityWindowError(TxcapError, ValueError):
    """A target outage level lies outside the window where a bound is invertible."""


class UnsaturatedNetworkError(TxcapError):
    """The potential-transmitter density is too small to reach the optimum."""


class SaturationError(TxcapError):
    """An empirical target is unreachable within the admissible control range."""


class ConfigError(TxcapError, ValueError):
    """A run configuration is malformed or violates a model invariant."""
