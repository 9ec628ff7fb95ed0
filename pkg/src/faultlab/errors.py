"""Exception hierarchy shared across the package.

Everything raised deliberately by faultlab derives from FaultLabError so
callers can catch one type at the boundary and let genuine bugs surface
as ordinary exceptions.
"""


class FaultLabError(Exception):
    """Base class for all errors raised on purpose by this package."""


class ParameterError(FaultLabError):
    """Scheme or ring parameters are malformed or inconsistent."""


class CapacityError(FaultLabError):
    """Requested message does not fit the available slots."""


class StateError(FaultLabError):
    """An operation was applied to an object in the wrong state."""


class ConfigError(FaultLabError):
    """An experiment configuration file or mapping is invalid."""


class TrialError(FaultLabError):
    """A fault trial could not be carried out as specified."""
