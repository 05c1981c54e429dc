"""Exception types shared across the library."""


class SizeLimitError(ValueError):
    """An operation would exceed the configured dense-dimension cap."""


class ValidationError(ValueError):
    """An operator or state fails a numerical validity check."""
