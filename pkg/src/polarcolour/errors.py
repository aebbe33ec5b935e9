"""Exception types shared across the package.

Exit-code mapping used by the CLI: DomainError/ApplicabilityError/ParseError
report as usage errors (exit 2), CapacityError as a budget breach (exit 3).
"""


class PolarColourError(Exception):
    """Base class for all package errors."""


class DomainError(PolarColourError):
    """A precondition on the operation's arguments was violated."""


class ApplicabilityError(DomainError):
    """A decision theorem's hypothesis fails for the given input.

    Carries the name of the failed hypothesis so verdicts can cite it.
    """

    def __init__(self, hypothesis, message=None):
        self.hypothesis = hypothesis
        super().__init__(message or f"hypothesis not met: {hypothesis}")


class CapacityError(PolarColourError):
    """A configured search budget or size bound was exceeded.

    Raised instead of ever returning a truncated (possibly wrong) answer.
    """


class ParseError(PolarColourError):
    """A text-format input was malformed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
