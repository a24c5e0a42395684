"""Exception types raised across the package."""


class RadlabError(Exception):
    """Base class for all package errors."""


class InvalidArgument(RadlabError, ValueError):
    pass


class OutOfRange(RadlabError, ValueError):
    """A value lies beyond the sieve table limit."""


class OutOfDomain(RadlabError, ValueError):
    """A value lies outside the mathematical domain of an operation."""


class PreconditionViolation(RadlabError, ValueError):
    pass


class ConstantValidationFailure(RadlabError):
    """A default constant failed its inequality scan.

    ``witness`` holds the point x at which the inequality broke.
    """

    def __init__(self, message, constant=None, witness=None):
        super().__init__(message)
        self.constant = constant
        self.witness = witness


class SolverFailure(RadlabError):
    pass


class BoundOverflow(RadlabError, OverflowError):
    pass


class IdentityMismatch(RadlabError, AssertionError):
    """Two routes to an exact identity disagreed."""
