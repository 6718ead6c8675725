"""Exception types shared across the package."""


class TheraloopError(Exception):
    """Base class for all package-specific errors."""


class CatalogError(TheraloopError, ValueError):
    """Raised when a behavior catalog file or object violates its schema."""


class TableError(TheraloopError, ValueError):
    """Raised when an instantiation table is malformed or has a missing cell."""


class ConfigError(TheraloopError, ValueError):
    """Raised when a session config fails validation. Names the offending field."""


class SessionStateError(TheraloopError, RuntimeError):
    """Raised when a session is driven out of order (stepping finished, deciding
    without a pending proposal, and so on)."""
