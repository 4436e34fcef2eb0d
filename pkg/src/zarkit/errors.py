"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: ``InputError`` -> 2,
``PreconditionError`` -> 3, ``CapExceededError`` -> 4.
"""


class ZarkitError(Exception):
    """Base class for every error raised by zarkit."""


class InputError(ZarkitError, ValueError):
    """Malformed or inconsistent input data (shapes, schemas, names)."""


class PreconditionError(ZarkitError):
    """A mathematical precondition of an operation does not hold."""


class NotPseudoEffectiveError(PreconditionError):
    """The active set left the negative definite regime, or a negative
    coefficient appeared: the divisor is not pseudo-effective in the model."""


class UndecidableError(PreconditionError):
    """The model does not carry enough data to decide the question."""


class CapExceededError(ZarkitError):
    """An exhaustive enumeration would exceed its configured bound."""

    def __init__(self, message: str, *, size: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.size = size
        self.cap = cap
