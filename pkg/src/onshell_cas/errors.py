"""Exception hierarchy shared by all modules."""


class OnshellError(Exception):
    """Base class for every error raised by this package."""


class NumericError(OnshellError):
    """Failures caused by numeric input (poles, degenerate points)."""


class DegenerateExpression(NumericError):
    pass


class CyclicSubstitution(OnshellError):
    pass


class UnboundSymbol(OnshellError):
    pass


class NumericPole(NumericError):
    pass


class ParseError(OnshellError):
    """Syntax error with the offending span of the input text."""

    def __init__(self, message, span, text=""):
        self.span = span
        self.text = text
        super().__init__(f"{message} at {span.start}:{span.end}")


class InvalidConstraint(OnshellError):
    pass


class UnknownVariable(OnshellError):
    pass


class MixedConstraints(OnshellError):
    pass


class IncompleteVelocities(OnshellError):
    pass


class NotUnitary(OnshellError):
    pass


class NotHermitian(OnshellError):
    pass


class MomentumZero(NumericError):
    pass


class LongitudinalUndefined(MomentumZero):
    pass
