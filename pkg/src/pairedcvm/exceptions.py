"""Exception types raised by pairedcvm."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class GridMismatchError(ValueError):
    """Two curves that must share a grid do not."""


class ConfigError(ValueError):
    """Invalid configuration value."""


class CacheIncompleteError(LookupError):
    """A projection needs a basis coefficient the cache does not hold."""


class DegenerateSampleError(ValueError):
    """Sample too small for the requested test."""


class IngestError(ValueError):
    """Malformed or unusable input time series."""
