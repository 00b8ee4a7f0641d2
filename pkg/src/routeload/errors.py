"""Exception classes shared across the package."""


class RouteloadError(Exception):
    """Base class for all package errors."""


class ConfigError(RouteloadError):
    """Scenario or parameter configuration is invalid."""


class SimulationLogicError(RouteloadError):
    """Internal simulator contract violated (e.g. scheduling in the past)."""


class NoRootInBracketError(RouteloadError):
    """Root finder was given a bracket without a sign change."""
