"""Exception hierarchy.  Every error carries the short code used in reports."""


class Pde2OdeError(Exception):
    code = "E_GENERIC"


class ParseError(Pde2OdeError):
    code = "E_SYNTAX"

    def __init__(self, message, position=None, expected=None):
        self.position = position
        self.expected = expected
        where = "" if position is None else " at offset %d" % position
        extra = "" if expected is None else " (expected %s)" % expected
        super().__init__(message + where + extra)


class UnknownSymbolError(ParseError):
    code = "E_UNKNOWN_SYMBOL"


class BadArityError(ParseError):
    code = "E_BAD_ARITY"


class DivisionByZeroError(Pde2OdeError, ZeroDivisionError):
    code = "E_DIV_ZERO"


class NoDerivativeError(Pde2OdeError):
    code = "E_NO_DERIVATIVE"


class NonTerminationError(Pde2OdeError):
    code = "E_NONTERMINATION"


class InconsistentError(Pde2OdeError):
    code = "E_INCONSISTENT"


class InfiniteDimensionalError(Pde2OdeError):
    code = "E_INFINITE"


class NotClosedError(Pde2OdeError):
    code = "E_NOT_CLOSED"


class NotLinearError(Pde2OdeError):
    code = "E_NOT_LINEAR"


class NotCommutingError(Pde2OdeError):
    code = "E_NOT_COMMUTING"


class EigenFailError(Pde2OdeError):
    code = "E_EIGEN_FAIL"


class PivotError(Pde2OdeError):
    code = "E_PIVOT"

    def __init__(self, message, inequation=None, t=None):
        self.inequation = inequation
        self.t = t
        super().__init__(message)


class ProjectionError(Pde2OdeError):
    code = "E_PROJECT_FAIL"


class PivotAtPointError(Pde2OdeError):
    code = "E_PIVOT_AT_POINT"
