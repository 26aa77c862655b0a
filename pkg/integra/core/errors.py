"""
Errors
======

Exceptions raised by integra. Everything derives from IntegraError so the command line can turn any of them into a
machine readable error and a nonzero exit code.
"""


class IntegraError(Exception):
    """Base class of all integra errors."""


class InvalidArgumentError(IntegraError, ValueError):
    """An agent, population or parameter does not fit the market it is used with."""


class UnmatchedAgentError(IntegraError):
    """A rank is requested for an agent that is matched to himself."""


class OracleSizeError(IntegraError):
    """A brute force routine was asked to work on an instance above its configured bound."""


class DomainError(IntegraError, ValueError):
    """An asymptotic formula is evaluated outside its domain (e.g. log n = 0)."""


class UnbalancedCommunityError(IntegraError):
    """A community does not hold the same number of men and women."""


class UnknownFixtureError(IntegraError, KeyError):
    """No fixture with this name is shipped."""


class MarketFormatError(IntegraError):
    """A market file could not be parsed."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f'line {line_number}: {message}'
        super().__init__(message)
        self.line_number = line_number


class InvariantViolation(IntegraError):
    """A simulated instance broke a property that holds for every stable scheme."""
