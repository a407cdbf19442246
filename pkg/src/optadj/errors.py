"""Exception hierarchy shared by every module."""


class OptAdjError(Exception):
    """Base class for all errors raised by optadj."""


class GraphError(OptAdjError, ValueError):
    pass


class CycleError(GraphError):
    pass


class InvalidVertex(GraphError, KeyError):
    def __str__(self):  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class OverlapError(OptAdjError, ValueError):
    pass


class InclusionViolation(OptAdjError, ValueError):
    """The (A, Y, L, N) tuple breaks one or more inclusion assumptions.

    ``problems`` lists every failed assumption, not just the first.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InvalidAdjustmentSet(OptAdjError, ValueError):
    pass


class PreconditionViolation(OptAdjError, ValueError):
    pass


class NoFiniteCut(OptAdjError, ValueError):
    pass


class NotACut(OptAdjError, ValueError):
    pass


class PositivityViolation(OptAdjError, ValueError):
    def __init__(self, message, configuration=None):
        self.configuration = configuration
        super().__init__(message)


class StateSpaceTooLarge(OptAdjError, ValueError):
    pass


class TooLarge(OptAdjError, ValueError):
    pass


class ParseError(OptAdjError, ValueError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
