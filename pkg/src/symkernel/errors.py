"""Exception hierarchy shared by the library and the CLI."""


class SymKernelError(Exception):
    """Base class for all errors raised by :mod:`symkernel`."""


class InvalidDimensionError(SymKernelError, ValueError):
    pass


class InvalidWeightError(SymKernelError, ValueError):
    pass


class InvalidInputError(SymKernelError, ValueError):
    pass


class DomainError(SymKernelError, ValueError):
    """A point lies outside the open unit polydisc."""


class DegeneratePointError(SymKernelError, ValueError):
    """Coordinates too close together for a quotient-by-Vandermonde formula.

    The series (Jacobi-Trudi) route is total and should be used instead.
    """


class ConvergenceError(SymKernelError, ValueError):
    pass


class SingularEvaluationError(SymKernelError, ArithmeticError):
    pass
