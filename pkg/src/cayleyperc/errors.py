"""Exception types shared across the package."""


class CayleypercError(Exception):
    """Base class for all package-specific errors."""


class PresentationError(CayleypercError):
    """Malformed or unsupported group presentation."""


class EncodingCollisionError(CayleypercError):
    """Two distinct group elements produced the same element key."""


class CapExceededError(CayleypercError):
    """A configured size cap (ball vertices, family size, search budget) was exceeded."""


class ConfigError(CayleypercError):
    """Invalid experiment configuration (unknown key, bad value, missing field)."""
