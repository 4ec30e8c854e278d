"""Exception hierarchy shared by all modules.

Every error carries the name of the module that raised it and a short
machine-readable code, so the command line can print a single
``ERROR <module>:<code>: <message>`` line.
"""


class QptsimError(Exception):
    """Base class for all package errors."""

    def __init__(self, message, *, module="qptsim", code="error"):
        super().__init__(message)
        self.module = module
        self.code = code

    def tag(self):
        return f"{self.module}:{self.code}"


class ValidationError(QptsimError, ValueError):
    """Invalid input: bad shapes, out-of-range parameters, unknown keys."""


class NumericalError(QptsimError, RuntimeError):
    """A numerical procedure could not deliver a trustworthy result."""


class ConvergenceError(NumericalError):
    pass


class DegeneracyError(NumericalError):
    pass
