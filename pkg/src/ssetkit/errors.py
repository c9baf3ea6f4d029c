"""Exception types shared across the package."""


class SsetError(Exception):
    """Base class for all package errors."""


class StructureError(SsetError):
    """Malformed object: missing table entries, dangling references, broken closure."""


class ParameterError(SsetError):
    """Arguments outside an operation's documented domain."""


class CapExceededError(ParameterError):
    """A construction would need simplices above the dimension cap; refused, never truncated."""


class CompatibilityError(SsetError):
    """Input data fail a required agreement condition; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DomainError(SsetError):
    """Evaluation requested at a point where the defining formula is undefined."""
