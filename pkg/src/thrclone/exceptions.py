"""Exception hierarchy shared by all modules."""


class ThrCloneError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(ThrCloneError, ValueError):
    """Arities or lengths of the operands do not match."""


class DomainError(ThrCloneError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(ThrCloneError):
    """The requested computation exceeds its configured budget."""


class ValidationError(ThrCloneError, ValueError):
    """A witness or certificate failed independent re-validation."""


class ConsistencyError(ThrCloneError):
    """Two routes that must agree produced different answers."""


class ParseError(ThrCloneError, ValueError):
    """Malformed text input; ``position`` is the offending character offset."""

    def __init__(self, message: str, text: str = "", position: int = -1):
        self.text = text
        self.position = position
        if position >= 0:
            message = f"{message} (at position {position} in {text!r})"
        super().__init__(message)


class EncodingError(DomainError):
    """A matrix entry does not fit the requested base."""
