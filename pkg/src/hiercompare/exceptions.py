"""Exception types raised across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class ParseError(InputError):
    """A results file could not be parsed.

    ``row`` and ``column`` are 1-based file coordinates when known.
    """

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        loc = ""
        if row is not None:
            loc = f" (row {row}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)


class DomainError(ValueError):
    """A parameter lies outside the domain of a function."""


class DegenerateInputError(ValueError):
    """Input without variability, for which a statistic is undefined."""


class UndefinedOddsError(ZeroDivisionError):
    """Both probabilities of a posterior-odds ratio are zero."""


class SetupError(RuntimeError):
    """The sampler could not be started from the supplied state."""
