"""Exception hierarchy.  The CLI maps these onto exit codes."""


class NBLabError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(NBLabError, ValueError):
    """A parameter violates an operation's precondition."""


class PoleError(NBLabError, ZeroDivisionError):
    """Evaluation requested at the pole ``s = 1``."""


class PrecisionError(NBLabError, ArithmeticError):
    """The accuracy target could not be met; ``bound`` is what was achieved."""

    def __init__(self, message, bound):
        super().__init__(f"{message} (achieved bound {bound:.3e})")
        self.bound = bound


class ConditioningError(NBLabError, ArithmeticError):
    """A linear system is singular or too ill-conditioned to trust."""

    def __init__(self, message, cond=float("inf")):
        super().__init__(f"{message} (condition estimate {cond:.3e})")
        self.cond = cond
