"""Exception types shared across the package."""


class WalkergeomError(Exception):
    pass


class ParseError(WalkergeomError):
    """Syntax or name error in a field expression, annotated with a character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class DomainError(WalkergeomError):
    """Evaluation entered a guarded region (division or log too close to singular)."""


class UsageError(WalkergeomError):
    """An operation was invoked on inputs it is not defined for."""


class ParameterError(UsageError):
    """A parametrized family was given parameters outside its validity range."""


class SamplingError(WalkergeomError):
    """Random direction sampling could not produce enough admissible samples."""


class OracleError(WalkergeomError):
    """The finite-difference reference evaluation failed or returned non-finite values."""
