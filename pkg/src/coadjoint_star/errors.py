"""Exception hierarchy; the CLI maps these onto exit codes."""


class StarProductError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(StarProductError, ValueError):
    """Unsupported or malformed input configuration (exit code 2)."""


class ArgumentError(StarProductError, ValueError):
    """An argument has the wrong shape or violates a precondition (exit code 2)."""


class DegenerateOrbitError(ConfigurationError):
    """lambda = 0: the orbit is a point and nothing can be quantized."""


class NonDegeneracyError(StarProductError):
    """A Shapovalov block is singular at the working lambda (exit code 3)."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class CutoffError(StarProductError):
    """The element B was truncated below what a computation needs (exit code 3)."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class InternalConsistencyError(StarProductError, RuntimeError):
    """A structural identity failed; indicates a construction bug."""
