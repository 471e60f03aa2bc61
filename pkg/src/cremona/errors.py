"""Exception hierarchy shared by every module of the package."""


class CremonaError(Exception):
    """Base class for all errors raised by :mod:`cremona`."""


class DegreeMismatch(CremonaError, ValueError):
    pass


class VarCountMismatch(CremonaError, ValueError):
    pass


class ArityMismatch(CremonaError, ValueError):
    pass


class DimensionMismatch(CremonaError, ValueError):
    pass


class MixedDegrees(CremonaError, ValueError):
    pass


class UnsupportedDomain(CremonaError, TypeError):
    pass


class IndexOutOfRange(CremonaError, IndexError):
    pass


class ZeroTuple(CremonaError, ValueError):
    pass


class ZeroVector(CremonaError, ValueError):
    pass


class DegenerateLine(CremonaError, ValueError):
    pass


class NotExactlyDivisible(CremonaError, ArithmeticError):
    pass


class PrecisionExhausted(CremonaError, ArithmeticError):
    """A p-adic value is only known modulo a power of p where a digit is needed."""


class DenominatorNotUnit(CremonaError, ValueError):
    pass


class CoefficientEscapesR(CremonaError, ValueError):
    pass


class IterateEscapesDomain(CremonaError, ValueError):
    pass


class StepSizeUnderflow(CremonaError, ValueError):
    pass


class EmptyGrid(CremonaError, ValueError):
    pass


class TooShort(CremonaError, ValueError):
    pass


class ParamOutOfRange(CremonaError, ValueError):
    pass


class UnknownScenario(CremonaError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class BadParams(CremonaError, ValueError):
    pass


class ParseError(CremonaError, ValueError):
    """Malformed map or polynomial literal; ``pos`` is the 0-based offset."""

    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None and text is not None:
            message = f"{message} at position {pos}\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


class NonHomogeneous(ParseError):
    pass


class UnknownVariable(ParseError):
    pass
