"""Exception types shared by every module and mapped to CLI exit codes."""


class FertilitopeError(Exception):
    """Base class for library errors."""


class DomainError(FertilitopeError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class ResourceError(FertilitopeError):
    """A brute-force oracle was asked to exceed its configured size bound."""
