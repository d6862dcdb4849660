"""Exception types shared across the package."""


class DomainError(ValueError):
    """An elementary function was applied outside its real domain."""


class DivisionByZero(ZeroDivisionError):
    """Jet division by a jet whose value is zero."""


class ExprSyntaxError(ValueError):
    """Malformed profile expression. ``offset`` is the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(ValueError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} at offset {offset}; only 'r' is a free variable")
        self.name = name
        self.offset = offset


class SingularPoint(ArithmeticError):
    """A closed-form quantity is singular at the requested point."""


class SingularMetric(SingularPoint):
    """The metric functions are non-finite or degenerate at the requested point."""


class UnphysicalShift(ValueError):
    """A frequency-shift factor would make a photon energy non-positive."""
