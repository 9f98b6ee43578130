"""Exception hierarchy shared by all modules."""


class IndhardError(Exception):
    """Base class for every error raised by the package."""


class InvalidParameters(IndhardError, ValueError):
    pass


class InstanceTooLarge(IndhardError):
    pass


class ParseError(IndhardError, ValueError):
    pass


class AssignmentSizeMismatch(IndhardError, ValueError):
    pass


class PrecisionExhausted(IndhardError, ArithmeticError):
    """Ball arithmetic could not certify a sign or digit count at the
    largest allowed working precision."""


class BracketFailure(IndhardError):
    pass


class GenerationFailure(IndhardError):
    pass
