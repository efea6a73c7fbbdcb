"""Exception hierarchy shared across the package."""


class FalsepredError(Exception):
    """Base class for all package errors."""


class ConfigError(FalsepredError):
    """Invalid configuration values (CLI exit code 2)."""


class GuardError(FalsepredError):
    """A resource guard was exceeded, e.g. too many pattern bits for
    exhaustive enumeration (CLI exit code 3)."""


class MonitorError(FalsepredError):
    """Rate estimation failed, e.g. a class is absent from the test set."""
