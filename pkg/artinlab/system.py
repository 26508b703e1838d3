"""
Polynomial systems over series rings

A SeriesPolynomial is a polynomial in the unknowns X1..Xn whose coefficients
are exact GradedSeries in T1..TN; a PolySystem is a finite list of them
generating the ideal whose Artin function is studied.
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .error import BadParameters, DimensionMismatch, MixedFields
from .fields import FieldDescriptor
from .series import INFINITY, GradedSeries, Order


Exponents = Tuple[int, ...]


class SeriesPolynomial:
    """Sparse polynomial in n unknowns with series coefficients"""

    def __init__(self, descriptor: FieldDescriptor, num_series_vars: int, num_unknowns: int,
                 terms: Optional[Mapping[Exponents, GradedSeries]] = None):
        """
        Args:
            descriptor: Coefficient field
            num_series_vars: N, the number of series variables T1..TN
            num_unknowns: n, the number of unknowns X1..Xn
            terms: Map from exponent vectors of the unknowns to coefficients
        """
        if num_unknowns < 1:
            raise DimensionMismatch("a polynomial needs at least one unknown")
        clean: Dict[Exponents, GradedSeries] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_unknowns or any(e < 0 for e in exps):
                raise DimensionMismatch(f"bad exponent vector {exps} for {num_unknowns} unknowns")
            if coeff.descriptor != descriptor:
                raise MixedFields(f"{coeff.descriptor} coefficient in a {descriptor} polynomial")
            if coeff.num_vars != num_series_vars:
                raise DimensionMismatch(f"coefficient in {coeff.num_vars} variables, expected {num_series_vars}")
            if not coeff.is_exact or coeff.is_laurent:
                raise BadParameters("coefficients must be exact series with nonnegative exponents")
            if len(coeff):
                clean[exps] = coeff
        self.descriptor = descriptor
        self.num_series_vars = num_series_vars
        self.num_unknowns = num_unknowns
        self.terms = clean

    # Constructors

    @classmethod
    def from_series(cls, series: GradedSeries, num_unknowns: int) -> 'SeriesPolynomial':
        return cls(series.descriptor, series.num_vars, num_unknowns,
                   {(0,) * num_unknowns: series})

    @classmethod
    def unknown(cls, descriptor: FieldDescriptor, num_series_vars: int, num_unknowns: int,
                index: int) -> 'SeriesPolynomial':
        """X_{index+1}"""
        exps = [0] * num_unknowns
        exps[index] = 1
        one = GradedSeries.constant(descriptor, num_series_vars)
        return cls(descriptor, num_series_vars, num_unknowns, {tuple(exps): one})

    def _like(self, terms) -> 'SeriesPolynomial':
        return SeriesPolynomial(self.descriptor, self.num_series_vars, self.num_unknowns, terms)

    def _check(self, other: 'SeriesPolynomial') -> 'SeriesPolynomial':
        if other.descriptor != self.descriptor:
            raise MixedFields(f"cannot combine {self.descriptor} and {other.descriptor}")
        if (other.num_series_vars, other.num_unknowns) != (self.num_series_vars, self.num_unknowns):
            raise DimensionMismatch("polynomials over different variable sets")
        return other

    # Arithmetic

    def add(self, other: 'SeriesPolynomial') -> 'SeriesPolynomial':
        other = self._check(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms[exps].add(coeff) if exps in terms else coeff
        return self._like(terms)

    def neg(self) -> 'SeriesPolynomial':
        return self._like({e: c.neg() for e, c in self.terms.items()})

    def sub(self, other: 'SeriesPolynomial') -> 'SeriesPolynomial':
        return self.add(self._check(other).neg())

    def mul(self, other: 'SeriesPolynomial') -> 'SeriesPolynomial':
        other = self._check(other)
        terms: Dict[Exponents, GradedSeries] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                product = c1.mul(c2)
                terms[e] = terms[e].add(product) if e in terms else product
        return self._like(terms)

    def power(self, exponent: int) -> 'SeriesPolynomial':
        if exponent < 0:
            raise BadParameters("negative exponent")
        result = SeriesPolynomial.from_series(
            GradedSeries.constant(self.descriptor, self.num_series_vars), self.num_unknowns)
        for _ in range(exponent):
            result = result.mul(self)
        return result

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def evaluate(self, values: Sequence[GradedSeries]) -> GradedSeries:
        """Substitute series for the unknowns; precision follows the series rules"""
        if len(values) != self.num_unknowns:
            raise DimensionMismatch(f"{len(values)} values for {self.num_unknowns} unknowns")
        powers: Dict[Tuple[int, int], GradedSeries] = {}

        def power_of(index: int, exponent: int) -> GradedSeries:
            key = (index, exponent)
            if key not in powers:
                powers[key] = values[index].power(exponent)
            return powers[key]

        result = GradedSeries.zero(self.descriptor, self.num_series_vars)
        for exps, coeff in sorted(self.terms.items()):
            term = coeff
            for index, exponent in enumerate(exps):
                if exponent:
                    term = term.mul(power_of(index, exponent))
            result = result.add(term)
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesPolynomial):
            return NotImplemented
        return (self.descriptor == other.descriptor
                and self.num_series_vars == other.num_series_vars
                and self.num_unknowns == other.num_unknowns
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.descriptor, self.num_series_vars, self.num_unknowns,
                     frozenset(self.terms.items())))

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in sorted(self.terms.items(), reverse=True):
            monomial = "*".join(f"X{j + 1}" if e == 1 else f"X{j + 1}^{e}"
                                for j, e in enumerate(exps) if e)
            if not monomial:
                pieces.append(f"({coeff.render()})")
            elif coeff == GradedSeries.constant(self.descriptor, self.num_series_vars):
                pieces.append(monomial)
            else:
                pieces.append(f"({coeff.render()})*{monomial}")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class PolySystem:
    """Generators f_1..f_m of an ideal of O_N[X1..Xn]"""

    descriptor: FieldDescriptor
    num_series_vars: int
    num_unknowns: int
    polys: Tuple[SeriesPolynomial, ...]
    label: str = ""

    def __post_init__(self):
        if not self.polys:
            raise BadParameters("a system needs at least one polynomial")
        for poly in self.polys:
            if poly.descriptor != self.descriptor:
                raise MixedFields(f"{poly.descriptor} polynomial in a {self.descriptor} system")
            if (poly.num_series_vars, poly.num_unknowns) != (self.num_series_vars, self.num_unknowns):
                raise DimensionMismatch("polynomials over different variable sets")

    def evaluate(self, values: Sequence[GradedSeries]) -> List[GradedSeries]:
        return [poly.evaluate(values) for poly in self.polys]

    def order_at(self, values: Sequence[GradedSeries]) -> Order:
        """min over the generators of ord f_l(x); raises IndeterminateOrder when undecided"""
        return min(value.ord() for value in self.evaluate(values))

    def order_low_at(self, values: Sequence[GradedSeries], cap: int) -> int:
        """min ord f_l(x) where it is decided below cap, otherwise cap"""
        lowest = min(value.ord_low() for value in self.evaluate(values))
        return cap if lowest == INFINITY or lowest >= cap else int(lowest)

    def vanishes_mod(self, values: Sequence[GradedSeries], bound: int) -> bool:
        return all(value.truncate(bound).is_zero_mod(bound) for value in self.evaluate(values))

    def render(self) -> str:
        return self.label or "; ".join(poly.render() for poly in self.polys)

    def __str__(self) -> str:
        return self.render()
