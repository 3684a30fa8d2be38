"""Exception types raised by powerca."""


class PowerCAError(Exception):
    """Base class for all library errors."""


class ValidationError(PowerCAError, ValueError):
    """Input violates a precondition (bad shape, sign, or parameter)."""


class ZeroMarginal(ValidationError):
    def __init__(self, index, axis):
        self.index = index
        self.axis = axis
        super().__init__(
            f"{axis} {index} sums to zero; marginal metrics must be strictly positive"
        )


class NonPositiveWeight(ValidationError):
    pass


class InvalidAlpha(ValidationError):
    pass


class NonPositiveEntry(ValidationError):
    def __init__(self, i, j, what="entry"):
        self.i = i
        self.j = j
        super().__init__(f"{what} ({i}, {j}) is not strictly positive")


class NonPositiveCell(NonPositiveEntry):
    """A zero cell where a log-based method needs strictly positive data."""

    def __init__(self, i, j):
        super().__init__(i, j, what="cell")


class NegativeEntry(ValidationError):
    def __init__(self, i, j):
        self.i = i
        self.j = j
        super().__init__(f"entry ({i}, {j}) is negative")


class BadZeroCount(ValidationError):
    pass


class ZeroGrandMean(ValidationError):
    pass


class ZeroMatrix(ValidationError):
    pass


class MismatchedSource(ValidationError):
    pass


class CenteringError(ValidationError):
    """An interaction matrix is not doubly centered under its metrics."""


class NotEnoughAxes(ValidationError):
    pass


class NoConvergence(PowerCAError, ArithmeticError):
    def __init__(self, max_iter, residual):
        self.max_iter = max_iter
        self.residual = residual
        super().__init__(
            f"no convergence after {max_iter} iterations (residual {residual:.3e})"
        )


class ParseError(ValidationError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}"
            if col is not None:
                where += f", column {col}"
            where += ": "
        super().__init__(where + message)
