"""Typed errors shared across the package."""


class ArgumentError(ValueError):
    """Malformed call: bad shapes, indices out of bounds, invalid tags."""


class NotCoxeter(ArgumentError):
    """Word is not a Coxeter element (a generator repeated or missing)."""


class SingularMatrix(ZeroDivisionError):
    """Inverse/negative power of a singular matrix."""


class NonGeneric(ZeroDivisionError):
    """A minor or Hankel determinant that must be nonzero vanished."""


class InvalidParams(ArgumentError):
    """Factorization parameters violate the nonzero requirements."""


class InvalidMove(ArgumentError):
    """Chart move requested whose precondition does not hold."""


class RangeError(ArgumentError):
    """Requested moments outside the derivable window."""


class FlowDiverged(ArithmeticError):
    """Numerical flow left the finite/generic regime."""


class NumericOverflow(ArithmeticError):
    """Floating-point overflow in a dense kernel."""
