class TilingMatroidError(Exception):
    """Base class for errors raised by this package."""


class InvalidParameterError(TilingMatroidError, ValueError):
    pass


class EmptyInputError(TilingMatroidError, ValueError):
    pass


class PreconditionError(TilingMatroidError, ValueError):
    pass


class ResourceLimitError(TilingMatroidError, RuntimeError):
    """A search or enumeration would exceed its configured budget."""

    def __init__(self, message: str, bound: int):
        super().__init__(message)
        self.bound = bound
