from typing import Optional

__all__ = ["CTPError", "NotAUnit", "ZeroInput", "PrimeMismatch", "DenominatorNotUnit",
           "ZeroRhs", "ArityMismatch", "SignatureMismatch", "BadCoordinate", "MalformedCode",
           "NotConjunctive", "DisjunctionPresent", "FormulaSyntaxError", "PathExprTypeError",
           "UnsupportedStructure", "UnsupportedFormula", "FuelExhausted", "TooLarge",
           "StubDiverged", "LabelUnavailable"]

class CTPError(Exception):
    """
    Base class of all the errors raised by ``ctp``.
    """
    pass

class NotAUnit(CTPError, ValueError):
    pass

class ZeroInput(CTPError, ValueError):
    pass

class PrimeMismatch(CTPError, ValueError):
    pass

class DenominatorNotUnit(CTPError, ValueError):
    pass

class ZeroRhs(CTPError, ValueError):
    pass

class ArityMismatch(CTPError, ValueError):
    pass

class SignatureMismatch(CTPError, ValueError):
    pass

class BadCoordinate(CTPError, ValueError):
    pass

class MalformedCode(CTPError, ValueError):
    pass

class NotConjunctive(CTPError, ValueError):
    pass

class DisjunctionPresent(CTPError, ValueError):
    pass

class FormulaSyntaxError(CTPError, ValueError):
    """
    Raised by the formula and path-expression parsers, ``position`` is the
    character offset in the input text where parsing failed.
    """
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"at position {position}: {message}")

class PathExprTypeError(CTPError, TypeError):
    pass

class UnsupportedStructure(CTPError, NotImplementedError):
    pass

class UnsupportedFormula(CTPError, NotImplementedError):
    pass

class FuelExhausted(CTPError, RuntimeError):
    def __init__(self, message: str, fuel: Optional[int] = None):
        self.fuel = fuel
        super().__init__(message)

class TooLarge(CTPError, RuntimeError):
    pass

class StubDiverged(CTPError, RuntimeError):
    pass

class LabelUnavailable(CTPError, RuntimeError):
    pass
