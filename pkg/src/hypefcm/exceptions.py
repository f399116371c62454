"""Exception types raised by hypefcm."""


class HypeFCMError(Exception):
    """Base class for all library errors."""


class UsageError(HypeFCMError, ValueError):
    """Invalid arguments: mismatched shapes, curvatures or configuration."""


class DataError(HypeFCMError, ValueError):
    """Malformed or non-finite input data."""
