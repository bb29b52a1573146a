# Exception hierarchy shared by every pdeforge module.


class PdeforgeError(Exception):
    """Base class for all errors raised by pdeforge."""


class IncompatibleRingError(PdeforgeError, TypeError):
    """Operands live in different coefficient rings (or cyclotomic moduli)."""


class SizeGuardError(PdeforgeError, ValueError):
    """A brute-force operation was asked for an input larger than it supports."""

    def __init__(self, what, size, limit):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what}={size} exceeds the supported limit {limit}")


class InvalidPDEError(PdeforgeError, ValueError):
    """The m-th power of an extracted coefficient is neither 0 nor 1."""

    def __init__(self, monomial, value):
        self.monomial = monomial
        self.value = value
        super().__init__(f"coefficient^m at monomial {sorted(monomial)} is {value}, not 0 or 1")


class PreconditionError(PdeforgeError, ValueError):
    """An operation precondition does not hold for the given input."""


class NonMultilinearError(PdeforgeError, ValueError):
    """A raw expansion produced a monomial with some exponent above one."""


class ConvergenceError(PdeforgeError, ArithmeticError):
    """A numeric routine failed to reach its tolerance."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class InputFormatError(PdeforgeError, ValueError):
    """A JSON document does not match the expected shape."""
