"""Exception hierarchy shared by every module of the package."""


class QFlagsError(Exception):
    """Base class for all errors raised by qflags."""


class NotPrimePower(QFlagsError, ValueError):
    pass


class Unsupported(QFlagsError, ValueError):
    pass


class SpecMismatch(QFlagsError, ValueError):
    """Operands live over different finite fields."""


class DivisionByZero(QFlagsError, ZeroDivisionError):
    pass


class AmbientMismatch(QFlagsError, ValueError):
    """Subspaces or vectors of different ambient dimension were combined."""


class DimensionMismatch(QFlagsError, ValueError):
    pass


class SingularMatrix(QFlagsError, ValueError):
    pass


class IndexOutOfRange(QFlagsError, IndexError):
    pass


class TooLarge(QFlagsError, ValueError):
    pass


class NotSymmetric(QFlagsError, ValueError):
    pass


class InvalidFlag(QFlagsError, ValueError):
    """Subspaces handed to a flag constructor do not form a (partial) flag."""


class BudgetExceeded(QFlagsError, RuntimeError):
    """An enumeration would produce more objects than the configured budget."""

    def __init__(self, needed: int, budget: int, what: str = "flags"):
        self.needed = needed
        self.budget = budget
        self.what = what
        super().__init__(
            f"{what} required: {needed}, budget: {budget} "
            f"(raise it with --budget or the STEINBERG_BUDGET environment variable)"
        )
