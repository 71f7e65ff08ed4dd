"""Exception types shared across the package."""


class GaugeLabError(Exception):
    """Base class for all package-specific errors."""


class MalformedInterval(GaugeLabError):
    """Interval endpoints out of order or outside the ambient domain."""


class ResolutionExceeded(GaugeLabError):
    """A requested dyadic resolution is finer than the caller allowed."""


class GaugeNotPositive(GaugeLabError):
    """A gauge evaluated to a non-positive width; gauges must be > 0 everywhere."""


class MaxDepthExceeded(GaugeLabError):
    """Bisection hit the depth cap before every subinterval fit its gauge.

    Carries the subinterval that failed to fit so callers can report it.
    """

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class SearchExhausted(GaugeLabError):
    """A randomized search ran out of attempts; carries index and window trace."""

    def __init__(self, message, index=None, trace=None):
        super().__init__(message)
        self.index = index
        self.trace = trace or []


class UnsupportedExactIntegration(GaugeLabError):
    """Closed-form integration was requested for an integrand class without one."""


class SpaceMismatch(GaugeLabError):
    """Operands live in different value spaces."""


class OverlappingItems(GaugeLabError):
    """Tagged items overlap in more than a null set where disjointness is required."""
