"""Exception types raised across the package."""


class IrsTradeoffError(Exception):
    """Base class for all package errors."""


class DegenerateGeometry(IrsTradeoffError, ValueError):
    """A placement makes an angle, distance or Jacobian entry undefined."""


class DimensionMismatch(IrsTradeoffError, ValueError):
    pass


class InvalidArgument(IrsTradeoffError, ValueError):
    pass


class SingularFim(IrsTradeoffError, ArithmeticError):
    """The accumulated Fisher information cannot be inverted reliably."""


class EmptySolution(IrsTradeoffError, ArithmeticError):
    """Neither KKT candidate satisfies the optimality conditions."""


class ConfigError(IrsTradeoffError, ValueError):
    """Invalid scenario configuration; ``problems`` lists per-field messages."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class UnknownExperiment(IrsTradeoffError, KeyError):
    pass
