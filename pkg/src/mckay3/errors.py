"""Exception types shared across the package."""


class McKayError(Exception):
    """Base class for all errors raised by mckay3."""


class DivisionByZero(McKayError, ZeroDivisionError):
    pass


class NotRational(McKayError, ValueError):
    pass


class Singular(McKayError, ValueError):
    pass


class OrderExceeded(McKayError):
    """Closure produced more elements than allowed."""


class InternalMismatch(McKayError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class NotSL(McKayError, ValueError):
    pass


class NotReflectionGroup(McKayError, ValueError):
    pass


class DegreeRecoveryFailed(McKayError):
    pass


class BadParameter(McKayError, ValueError):
    pass


class UnknownFamily(McKayError, ValueError):
    pass


class UnknownCase(McKayError, ValueError):
    pass


class Degenerate(McKayError, ValueError):
    pass


class BadCodim(McKayError, ValueError):
    pass


class ParseError(McKayError, ValueError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)
