"""Exception types shared across the package."""


class ExtrafunError(Exception):
    """Base class for all errors raised by extrafun."""


class ExprSyntaxError(ExtrafunError, ValueError):
    """Malformed expression source.

    ``offset`` is the byte offset (UTF-8) of the offending token and
    ``expected`` the set of token kinds the parser would have accepted.
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        if self.expected:
            message = f"{message} at offset {offset}; expected one of: {', '.join(sorted(self.expected))}"
        else:
            message = f"{message} at offset {offset}"
        super().__init__(message)


class DomainError(ExtrafunError, ArithmeticError):
    """Evaluation left the real domain (log of non-positive, division by zero, ...)."""


class ShapeError(ExtrafunError, ValueError):
    """A value has the wrong shape for the operation (e.g. x-dependent input to an
    absolute-value probe, or a probe family mixing variants)."""


class FamilyMismatch(ExtrafunError, ValueError):
    """Hyperspace elements from different seminorm families were combined."""


class NotSeparable(ExtrafunError):
    """No probe keeps the two classes apart on the sampled window."""


class OutOfDomain(ExtrafunError):
    """A section is not defined on the given element."""


class UndefinedDerivative(ExtrafunError):
    """No index from which all terms of a sequence are differentiable was found."""


class ZeroScalar(ExtrafunError, ValueError):
    """Multiplicative conjugation by zero."""


class PreconditionViolation(ExtrafunError):
    """An operation's precondition does not hold; ``report`` carries the evidence."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
