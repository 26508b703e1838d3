"""
Sparse precision-tracked graded series

A GradedSeries is a finite map from exponent vectors to field coefficients
together with a total-degree precision: a finite precision pi means the
series is only known modulo m^pi. Negative exponents are allowed (Laurent
graded) so elements of the completed valuation ring, such as the square
root of T1^2 + T2^p, can be expanded by total degree.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from operator import add as _add_ints
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .error import (DimensionMismatch, IndeterminateOrder, MixedFields, NotAUnit,
                    PrecisionIncrease)
from .fields import FieldDescriptor, FieldScalar, RawValue


logger = logging.getLogger(__name__)

EXACT = None
INFINITY = math.inf

Order = Union[int, float]
Exponents = Tuple[int, ...]


class DomainFlag(Enum):
    """Whether a series may carry negative exponents"""
    NON_NEG = "nonneg"
    LAURENT = "laurent"


class ExponentVector(tuple):
    """Exponents of T1..TN with the cached total degree"""

    def __new__(cls, exponents: Iterable[int]):
        vector = super().__new__(cls, tuple(int(e) for e in exponents))
        vector.total_degree = sum(vector)
        return vector


def grlex_key(exponents: Sequence[int]):
    """Canonical term order: total degree ascending, then T1 before T2 ..."""
    return (sum(exponents), tuple(-e for e in exponents))


def monomials_of_degree(num_vars: int, degree: int) -> List[Exponents]:
    """All nonnegative exponent vectors of a given total degree, canonical order"""
    if num_vars == 1:
        return [(degree,)]
    result = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(num_vars - 1, degree - first):
            result.append((first,) + rest)
    return result


def monomials_below(num_vars: int, bound: int) -> List[Exponents]:
    """Nonnegative exponent vectors of total degree < bound, canonical order"""
    result = []
    for degree in range(bound):
        result.extend(monomials_of_degree(num_vars, degree))
    return result


def _min_precision(*values: Optional[Order]) -> Optional[int]:
    finite = [v for v in values if v is not None and v != INFINITY]
    return int(min(finite)) if finite else EXACT


class GradedSeries:
    """Immutable sparse series over a FieldDescriptor in num_vars variables"""

    __slots__ = ("descriptor", "num_vars", "_terms", "precision", "domain_flag")

    def __init__(self, descriptor: FieldDescriptor, num_vars: int,
                 terms: Optional[Mapping] = None, precision: Optional[int] = EXACT,
                 domain_flag: Optional[DomainFlag] = None):
        if num_vars < 1:
            raise DimensionMismatch("series need at least one variable")
        clean: Dict[Exponents, RawValue] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars:
                raise DimensionMismatch(f"exponent vector {exps} for {num_vars} variables")
            if precision is not None and sum(exps) >= precision:
                continue
            if isinstance(coeff, FieldScalar):
                coeff = descriptor.element(coeff).value
            else:
                coeff = descriptor.reduce(Fraction(coeff) if isinstance(coeff, str) else coeff)
            if coeff:
                clean[exps] = coeff
        laurent = any(e < 0 for exps in clean for e in exps)
        if domain_flag is None:
            domain_flag = DomainFlag.LAURENT if laurent else DomainFlag.NON_NEG
        elif domain_flag is DomainFlag.NON_NEG and laurent:
            raise ValueError("negative exponent in a NonNegExponents series")
        self.descriptor = descriptor
        self.num_vars = num_vars
        self._terms = clean
        self.precision = precision
        self.domain_flag = domain_flag

    @classmethod
    def _build(cls, descriptor, num_vars, terms, precision, domain_flag) -> 'GradedSeries':
        # terms must already be canonical, nonzero and below precision
        series = cls.__new__(cls)
        series.descriptor = descriptor
        series.num_vars = num_vars
        series._terms = terms
        series.precision = precision
        series.domain_flag = domain_flag
        return series

    # Constructors

    @classmethod
    def zero(cls, descriptor: FieldDescriptor, num_vars: int,
             precision: Optional[int] = EXACT) -> 'GradedSeries':
        return cls._build(descriptor, num_vars, {}, precision, DomainFlag.NON_NEG)

    @classmethod
    def constant(cls, descriptor: FieldDescriptor, num_vars: int, value=1,
                 precision: Optional[int] = EXACT) -> 'GradedSeries':
        return cls(descriptor, num_vars, {(0,) * num_vars: value}, precision)

    @classmethod
    def monomial(cls, descriptor: FieldDescriptor, exponents: Sequence[int],
                 coefficient=1, precision: Optional[int] = EXACT) -> 'GradedSeries':
        return cls(descriptor, len(exponents), {tuple(exponents): coefficient}, precision)

    @classmethod
    def variable(cls, descriptor: FieldDescriptor, num_vars: int, index: int) -> 'GradedSeries':
        """T_{index+1}"""
        exps = [0] * num_vars
        exps[index] = 1
        return cls.monomial(descriptor, exps)

    # Inspection

    @property
    def terms(self) -> Dict[ExponentVector, FieldScalar]:
        return {ExponentVector(e): FieldScalar(self.descriptor, c)
                for e, c in sorted(self._terms.items(), key=lambda item: grlex_key(item[0]))}

    def raw_terms(self) -> Dict[Exponents, RawValue]:
        return dict(self._terms)

    def coefficient(self, exponents: Sequence[int]) -> FieldScalar:
        raw = self._terms.get(tuple(exponents), self.descriptor.zero_value)
        return FieldScalar(self.descriptor, raw)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[ExponentVector, FieldScalar]]:
        return iter(self.terms.items())

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    @property
    def is_laurent(self) -> bool:
        return self.domain_flag is DomainFlag.LAURENT

    def ord(self) -> Order:
        """Minimum total degree; +inf for the exact zero series"""
        if self._terms:
            return min(sum(e) for e in self._terms)
        if self.precision is None:
            return INFINITY
        raise IndeterminateOrder(f"series is zero modulo m^{self.precision}")

    def ord_low(self) -> Order:
        """ord when determinate, otherwise the precision"""
        if self._terms or self.precision is None:
            return self.ord()
        return self.precision

    def is_zero_mod(self, bound: int) -> bool:
        """True when the series lies in m^bound"""
        if any(sum(e) < bound for e in self._terms):
            return False
        if self.precision is not None and self.precision < bound:
            raise IndeterminateOrder(f"series known modulo m^{self.precision}, asked m^{bound}")
        return True

    def homogeneous_component(self, degree: int) -> 'GradedSeries':
        if self.precision is not None and degree >= self.precision:
            raise PrecisionIncrease(f"degree {degree} is beyond precision {self.precision}")
        terms = {e: c for e, c in self._terms.items() if sum(e) == degree}
        return GradedSeries._build(self.descriptor, self.num_vars, terms, EXACT, self.domain_flag)

    def lowest_form(self) -> 'GradedSeries':
        return self.homogeneous_component(int(self.ord())) if self._terms else self.exact()

    def exact(self) -> 'GradedSeries':
        """The stored terms read as an exact polynomial"""
        return GradedSeries._build(self.descriptor, self.num_vars, self._terms, EXACT,
                                   self.domain_flag)

    # Arithmetic

    def _coerce(self, other) -> 'GradedSeries':
        if isinstance(other, GradedSeries):
            if other.descriptor != self.descriptor:
                raise MixedFields(f"cannot combine {self.descriptor} and {other.descriptor}")
            if other.num_vars != self.num_vars:
                raise DimensionMismatch(f"{self.num_vars} vs {other.num_vars} variables")
            return other
        return GradedSeries.constant(self.descriptor, self.num_vars, other)

    def _flag_with(self, other: 'GradedSeries') -> DomainFlag:
        if self.is_laurent or other.is_laurent:
            return DomainFlag.LAURENT
        return DomainFlag.NON_NEG

    def _combine(self, other: 'GradedSeries', sign: int) -> 'GradedSeries':
        other = self._coerce(other)
        precision = _min_precision(self.precision, other.precision)
        reduce = self.descriptor.reduce
        acc = {e: c for e, c in self._terms.items()
               if precision is None or sum(e) < precision}
        for e, c in other._terms.items():
            if precision is not None and sum(e) >= precision:
                continue
            acc[e] = acc.get(e, 0) + (c if sign > 0 else -c)
        terms = {}
        for e, c in acc.items():
            c = reduce(c)
            if c:
                terms[e] = c
        return GradedSeries._build(self.descriptor, self.num_vars, terms, precision,
                                   self._flag_with(other))

    def add(self, other) -> 'GradedSeries':
        return self._combine(other, 1)

    def sub(self, other) -> 'GradedSeries':
        return self._combine(other, -1)

    def mul(self, other) -> 'GradedSeries':
        other = self._coerce(other)
        candidates = []
        if self.precision is not None:
            candidates.append(self.precision + other.ord_low())
        if other.precision is not None:
            candidates.append(other.precision + self.ord_low())
        precision = _min_precision(*candidates)
        right = sorted(((e, c, sum(e)) for e, c in other._terms.items()), key=lambda t: t[2])
        acc: Dict[Exponents, RawValue] = {}
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2, d2 in right:
                if precision is not None and d1 + d2 >= precision:
                    break
                e = tuple(map(_add_ints, e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        reduce = self.descriptor.reduce
        terms = {}
        for e, c in acc.items():
            c = reduce(c)
            if c:
                terms[e] = c
        return GradedSeries._build(self.descriptor, self.num_vars, terms, precision,
                                   self._flag_with(other))

    def scale(self, value) -> 'GradedSeries':
        value = self.descriptor.element(value).value
        if not value:
            return GradedSeries.zero(self.descriptor, self.num_vars, self.precision)
        reduce = self.descriptor.reduce
        terms = {e: reduce(c * value) for e, c in self._terms.items()}
        return GradedSeries._build(self.descriptor, self.num_vars, terms, self.precision,
                                   self.domain_flag)

    def neg(self) -> 'GradedSeries':
        return self.scale(-1)

    def power(self, exponent: int) -> 'GradedSeries':
        if exponent < 0:
            raise ValueError("negative powers need invert_unit")
        result = GradedSeries.constant(self.descriptor, self.num_vars)
        base = self
        while exponent:
            if exponent & 1:
                result = result.mul(base)
            exponent >>= 1
            if exponent:
                base = base.mul(base)
        return result

    def shift(self, exponents: Sequence[int]) -> 'GradedSeries':
        """Multiply by the Laurent monomial T^exponents"""
        exponents = tuple(exponents)
        if len(exponents) != self.num_vars:
            raise DimensionMismatch(f"shift {exponents} for {self.num_vars} variables")
        degree = sum(exponents)
        terms = {tuple(map(_add_ints, e, exponents)): c for e, c in self._terms.items()}
        precision = None if self.precision is None else self.precision + degree
        return GradedSeries(self.descriptor, self.num_vars, terms, precision)

    def truncate(self, precision: int) -> 'GradedSeries':
        """Drop every term of total degree >= precision"""
        if self.precision is not None and precision > self.precision:
            raise PrecisionIncrease(
                f"cannot raise precision from {self.precision} to {precision}")
        terms = {e: c for e, c in self._terms.items() if sum(e) < precision}
        return GradedSeries._build(self.descriptor, self.num_vars, terms, precision,
                                   self.domain_flag)

    def invert_unit(self, target_precision: int) -> 'GradedSeries':
        """
        Inverse modulo m^target_precision by Newton iteration g <- g(2 - fg)

        A unit is a series whose degree-0 part is a nonzero constant (Laurent
        terms of positive degree are allowed).
        """
        zero = (0,) * self.num_vars
        degree_zero = [e for e in self._terms if sum(e) <= 0]
        if degree_zero != [zero]:
            raise NotAUnit(f"series {self} is not a unit")
        if target_precision < 1:
            raise ValueError("target precision must be positive")
        if self.precision is not None and target_precision > self.precision:
            raise PrecisionIncrease(
                f"unit known modulo m^{self.precision}, inverse asked modulo m^{target_precision}")
        descriptor = self.descriptor
        inverse_constant = descriptor.inv_value(self._terms[zero])
        if len(self._terms) == 1 and self.precision is None:
            return GradedSeries.constant(descriptor, self.num_vars, inverse_constant)
        g = GradedSeries.constant(descriptor, self.num_vars, inverse_constant, precision=1)
        two = GradedSeries.constant(descriptor, self.num_vars, 2)
        reached = 1
        while reached < target_precision:
            reached = min(2 * reached, target_precision)
            f_trunc = self.truncate(reached)
            g_exact = g.exact()
            g = g_exact.mul(two.sub(f_trunc.mul(g_exact))).truncate(reached)
            logger.debug("invert_unit: precision %d, %d terms", reached, len(g))
        return g

    # Operators

    def __add__(self, other):
        return self.add(other)

    __radd__ = __add__

    def __sub__(self, other):
        return self.sub(other)

    def __rsub__(self, other):
        return self._coerce(other).sub(self)

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.neg()

    def __pow__(self, exponent: int):
        return self.power(exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (self.descriptor == other.descriptor and self.num_vars == other.num_vars
                and self.precision == other.precision and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.descriptor, self.num_vars, self.precision,
                     frozenset(self._terms.items())))

    # Rendering

    def render(self) -> str:
        """Canonical text: graded-lex terms, then '+ O(deg >= pi)' when inexact"""
        pieces = []
        for exps, coeff in sorted(self._terms.items(), key=lambda item: grlex_key(item[0])):
            negative = isinstance(coeff, Fraction) and coeff < 0
            magnitude = -coeff if negative else coeff
            monomial = "*".join(
                f"T{index + 1}" if e == 1 else f"T{index + 1}^{e}"
                for index, e in enumerate(exps) if e != 0)
            if not monomial:
                body = str(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{magnitude}*{monomial}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        text = " ".join(pieces) if pieces else "0"
        if self.precision is not None:
            text += f" + O(deg >= {self.precision})"
        return text

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"GradedSeries({self.descriptor}, {self.render()!r})"


@dataclass(frozen=True)
class SeriesFraction:
    """numerator / denominator with both parts in O_N"""

    numerator: GradedSeries
    denominator: GradedSeries

    def __post_init__(self):
        for part in (self.numerator, self.denominator):
            if part.is_laurent:
                raise ValueError("fraction parts must have nonnegative exponents")
        self.numerator._coerce(self.denominator)
        if self.denominator.ord_low() == INFINITY:
            raise ZeroDivisionError("zero denominator")

    def ord(self) -> Order:
        return fraction_reduce_ord(self)

    def in_valuation_ring(self) -> bool:
        """Whether the fraction lies in V_N, i.e. ord(numerator) >= ord(denominator)"""
        return self.ord() >= 0

    def to_graded(self, precision: int) -> GradedSeries:
        """
        Expand as a Laurent-graded series known modulo m^precision

        The denominator's lowest form must be a single monomial c*T^e; the
        remaining factor is then a unit.
        """
        den = self.denominator
        lowest = den.lowest_form()
        if len(lowest) != 1:
            raise NotAUnit(f"denominator lowest form {lowest} is not a monomial")
        (exps, coeff), = lowest.raw_terms().items()
        inv_exps = tuple(-e for e in exps)
        inv_coeff = den.descriptor.inv_value(coeff)
        unit = den.shift(inv_exps).scale(inv_coeff)
        num = self.numerator.shift(inv_exps).scale(inv_coeff)
        if num.ord_low() == INFINITY:
            return GradedSeries.zero(den.descriptor, den.num_vars)
        unit_precision = max(1, precision - int(num.ord_low()))
        if unit.precision is not None:
            unit_precision = min(unit_precision, unit.precision)
        inverse = unit.invert_unit(unit_precision)
        result = num.mul(inverse)
        if result.precision is not None and result.precision > precision:
            result = result.truncate(precision)
        return result

    def __str__(self) -> str:
        return f"({self.numerator.render()}) / ({self.denominator.render()})"


# Module-level operations


def ord(f: GradedSeries) -> Order:  # noqa: A001 - mirrors the valuation's name
    return f.ord()


def add(f: GradedSeries, g: GradedSeries) -> GradedSeries:
    return f.add(g)


def sub(f: GradedSeries, g: GradedSeries) -> GradedSeries:
    return f.sub(g)


def mul(f: GradedSeries, g: GradedSeries) -> GradedSeries:
    return f.mul(g)


def invert_unit(f: GradedSeries, target_precision: int) -> GradedSeries:
    return f.invert_unit(target_precision)


def truncate(f: GradedSeries, precision: int) -> GradedSeries:
    return f.truncate(precision)


def fraction_reduce_ord(fraction: SeriesFraction) -> Order:
    """ord(numerator) - ord(denominator)"""
    num = fraction.numerator.ord()
    den = fraction.denominator.ord()
    if num == INFINITY:
        return INFINITY
    return num - den
