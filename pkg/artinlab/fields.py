"""
Exact coefficient fields

Prime fields F_q (q an odd prime) and the rationals behind one descriptor.
Series code works on raw canonical values (int residues or Fractions) through
the descriptor; FieldScalar is the public value type.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from sympy import Integer, Rational, isprime
from sympy.ntheory import sqrt_mod
from sympy.polys.domains import GF, QQ

from .error import CharTwo, ConfigError, DivisionByZero, MixedFields, NonReducibleModQ


RawValue = Union[int, Fraction]

_LABEL_RE = re.compile(r"^\s*(?:F_?|GF)\(?(\d+)\)?\s*$", re.IGNORECASE)


class FieldKind(Enum):
    """Kind of coefficient field"""
    PRIME = "prime"
    RATIONALS = "rationals"


@dataclass(frozen=True)
class FieldDescriptor:
    """A coefficient field: F_q for an odd prime q, or Q (characteristic 0)"""

    kind: FieldKind
    characteristic: int

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.characteristic != 0:
                raise ConfigError("the rationals have characteristic 0")
            return
        q = self.characteristic
        if q == 2:
            raise CharTwo("characteristic 2 is not supported")
        if q < 3 or not isprime(q):
            raise ConfigError(f"F_q needs an odd prime q, got {q}")

    @classmethod
    def prime(cls, q: int) -> 'FieldDescriptor':
        return cls(FieldKind.PRIME, int(q))

    @classmethod
    def rationals(cls) -> 'FieldDescriptor':
        return cls(FieldKind.RATIONALS, 0)

    @classmethod
    def parse(cls, label: str) -> 'FieldDescriptor':
        """
        Parse a field label

        Accepts ``Q`` / ``QQ`` for the rationals and ``F<q>``, ``F_<q>``
        or ``GF(<q>)`` for a prime field.
        """
        text = label.strip()
        if text.upper() in ("Q", "QQ"):
            return cls.rationals()
        match = _LABEL_RE.match(text)
        if not match:
            raise ConfigError(f"Unknown field label: {label!r} (use Q or F<q>)")
        return cls.prime(int(match.group(1)))

    @property
    def is_prime(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def label(self) -> str:
        return f"F{self.characteristic}" if self.is_prime else "Q"

    def __str__(self) -> str:
        return self.label

    # Raw arithmetic. Values are canonical ints in [0, q) or Fractions.

    def reduce(self, value) -> RawValue:
        """Bring an int or Fraction produced by +, -, * back to canonical form"""
        if self.is_prime:
            if isinstance(value, Fraction):
                return self.from_fraction(value)
            return value % self.characteristic
        if isinstance(value, Fraction):
            return value
        return Fraction(value)

    @property
    def zero_value(self) -> RawValue:
        return 0 if self.is_prime else Fraction(0)

    @property
    def one_value(self) -> RawValue:
        return 1 if self.is_prime else Fraction(1)

    def inv_value(self, value: RawValue) -> RawValue:
        if not value:
            raise DivisionByZero(f"inverse of zero in {self.label}")
        if self.is_prime:
            return pow(value, -1, self.characteristic)
        return 1 / value

    def from_fraction(self, value: Fraction) -> RawValue:
        """Map a rational into this field"""
        value = Fraction(value)
        if not self.is_prime:
            return value
        q = self.characteristic
        if value.denominator % q == 0:
            raise NonReducibleModQ(f"{value} has a denominator divisible by {q}")
        return value.numerator * pow(value.denominator, -1, q) % q

    def sqrt_value(self, value: RawValue) -> Optional[RawValue]:
        """Canonical square root, or None when value is not a square"""
        if not value:
            return self.zero_value
        if self.is_prime:
            return sqrt_mod(int(value), self.characteristic)
        if value < 0:
            return None
        num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
        if num * num != value.numerator or den * den != value.denominator:
            return None
        return Fraction(num, den)

    def render_value(self, value: RawValue) -> str:
        return str(value)

    # Public scalars

    def element(self, value) -> 'FieldScalar':
        if isinstance(value, FieldScalar):
            if value.descriptor != self:
                raise MixedFields(f"{value.descriptor} element used in {self}")
            return value
        if isinstance(value, str):
            value = Fraction(value)
        return FieldScalar(self, self.reduce(value))

    def zero(self) -> 'FieldScalar':
        return FieldScalar(self, self.zero_value)

    def one(self) -> 'FieldScalar':
        return FieldScalar(self, self.one_value)

    # sympy bridge, used for linear algebra and dense test oracles

    @property
    def domain(self):
        return GF(self.characteristic) if self.is_prime else QQ

    def to_domain(self, value: RawValue):
        if self.is_prime:
            return self.domain(int(value))
        return self.domain(value.numerator, value.denominator)

    def to_sympy(self, value: RawValue):
        if self.is_prime:
            return Integer(int(value))
        return Rational(value.numerator, value.denominator)

    def from_sympy(self, expr) -> RawValue:
        expr = Rational(expr)
        return self.reduce(Fraction(int(expr.p), int(expr.q)))


@dataclass(frozen=True)
class FieldScalar:
    """Exact element of a coefficient field, always in canonical form"""

    descriptor: FieldDescriptor
    value: RawValue

    def _check(self, other) -> 'FieldScalar':
        if not isinstance(other, FieldScalar):
            return self.descriptor.element(other)
        if other.descriptor != self.descriptor:
            raise MixedFields(f"cannot combine {self.descriptor} and {other.descriptor}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldScalar(self.descriptor, self.descriptor.reduce(self.value + other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return FieldScalar(self.descriptor, self.descriptor.reduce(self.value - other.value))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return FieldScalar(self.descriptor, self.descriptor.reduce(self.value * other.value))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(self.descriptor, self.descriptor.reduce(-self.value))

    def inverse(self) -> 'FieldScalar':
        return FieldScalar(self.descriptor, self.descriptor.inv_value(self.value))

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.descriptor.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.value

    def __bool__(self) -> bool:
        return bool(self.value)

    def __str__(self) -> str:
        return self.descriptor.render_value(self.value)


def field_add(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    return a + b


def field_mul(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    return a * b


def field_neg(a: FieldScalar) -> FieldScalar:
    return -a


def field_inv(a: FieldScalar) -> FieldScalar:
    return a.inverse()


@lru_cache(maxsize=None)
def _binomial_half_rational(n: int) -> Fraction:
    # c_n = c_{n-1} * (1/2 - (n-1)) / n
    if n == 0:
        return Fraction(1)
    return _binomial_half_rational(n - 1) * (Fraction(1, 2) - (n - 1)) / n


def binomial_half_closed_form(n: int) -> Fraction:
    """(-1)^(n-1) (2n-2)! / (2^(2n-1) (n-1)! n!) for n >= 1, and 1 for n = 0"""
    if n == 0:
        return Fraction(1)
    sign = -1 if (n - 1) % 2 else 1
    return Fraction(sign * math.factorial(2 * n - 2),
                    2 ** (2 * n - 1) * math.factorial(n - 1) * math.factorial(n))


def binomial_half(n: int, descriptor: FieldDescriptor) -> FieldScalar:
    """
    Coefficient a_n of the square root series sqrt(1 + w) = sum a_n w^n

    Computed exactly over Q and then mapped into the target field. The reduced
    denominator of a_n is a power of two, so reduction into F_q never fails for
    odd q; NonReducibleModQ is still raised if it ever would.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return FieldScalar(descriptor, descriptor.from_fraction(_binomial_half_rational(n)))
