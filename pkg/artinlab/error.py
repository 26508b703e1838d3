"""Error types and handling for artinlab"""


class ArtinLabError(Exception):
    """Base exception class for artinlab"""
    pass


# Field arithmetic

class MixedFields(ArtinLabError):
    """Operands live over different coefficient fields"""
    pass


class DivisionByZero(ArtinLabError, ZeroDivisionError):
    """Inverse of zero requested"""
    pass


class NonReducibleModQ(ArtinLabError):
    """A rational cannot be mapped to F_q (q divides its denominator)"""
    pass


class CharTwo(ArtinLabError):
    """Operation needs 2 to be invertible"""
    pass


# Series

class DimensionMismatch(ArtinLabError):
    """Series with different numbers of variables"""
    pass


class IndeterminateOrder(ArtinLabError):
    """Series is zero at its precision, so its order is unknown"""
    pass


class NotAUnit(ArtinLabError):
    """Series has no invertible degree-0 part"""
    pass


class PrecisionIncrease(ArtinLabError):
    """Truncation above the known precision was requested"""
    pass


class PrecisionTooLow(ArtinLabError):
    """Working precision cannot decide the requested order"""
    pass


class NotASquareLeadingForm(ArtinLabError):
    """Leading form is not a square monomial with square coefficient"""
    pass


# Experiments

class BadParameters(ArtinLabError):
    """Experiment parameters outside their admissible range"""
    pass


class BadParity(BadParameters):
    """An even index was required"""
    pass


class BudgetError(ArtinLabError):
    """An enumeration would exceed its configured budget"""
    pass


class BudgetExceeded(BudgetError):
    """Jet enumeration budget exceeded"""
    pass


class SearchBudgetExceeded(BudgetError):
    """Square-obstruction search ran past its degree or candidate budget"""
    pass


class NoSuchB(ArtinLabError):
    """No bound below the jet order works; beta is at least beta_lower"""

    def __init__(self, message: str, beta_lower: int):
        super().__init__(message)
        self.beta_lower = beta_lower


# Input and configuration

class ConfigError(ArtinLabError):
    """Configuration validation error"""
    pass


class PresetError(ArtinLabError):
    """Error loading a preset"""
    pass


class PolySyntaxError(ArtinLabError):
    """Malformed polynomial expression"""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col


class UnknownVariable(PolySyntaxError):
    """Variable not declared for the given N and n"""
    pass


class NegativeExponent(PolySyntaxError):
    """Exponent literal below zero"""
    pass
