"""Exception types raised across npspectra."""


class SpectrumError(RuntimeError):
    """An eigen-solve could not be carried out (e.g. the single layer is not positive definite)."""


class ConfigError(ValueError):
    """A run configuration is malformed: unknown key, wrong type or out-of-range value."""
