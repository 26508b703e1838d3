"""
Jet enumeration engine

Enumerates n-tuples of series over F_q known modulo m^c in a fixed canonical
order, with a size estimate checked against a budget and block slicing for
parallel workers.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .error import BadParameters, BudgetExceeded, DimensionMismatch
from .fields import FieldDescriptor
from .series import GradedSeries, monomials_below, monomials_of_degree


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Jet:
    """An n-tuple of series sharing one precision (None for exact samples)"""

    values: Tuple[GradedSeries, ...]
    order: Optional[int]

    def __post_init__(self):
        if not self.values:
            raise DimensionMismatch("a jet needs at least one component")
        for value in self.values:
            if value.precision != self.order:
                raise BadParameters(f"component known modulo m^{value.precision}, jet order {self.order}")
            if value.is_laurent:
                raise BadParameters("jet components must have nonnegative exponents")

    @classmethod
    def of(cls, values: Sequence[GradedSeries], order: Optional[int] = None) -> 'Jet':
        """Build a jet, truncating every component to the given order"""
        if order is not None:
            values = [value.truncate(order) for value in values]
        return cls(tuple(values), order)

    @property
    def descriptor(self) -> FieldDescriptor:
        return self.values[0].descriptor

    def truncate(self, order: int) -> 'Jet':
        return Jet(tuple(value.truncate(order) for value in self.values), order)

    def key(self) -> Tuple:
        """Hashable identity of the jet"""
        return (self.order,) + tuple(frozenset(value.raw_terms().items()) for value in self.values)

    def min_order(self):
        """min_k ord(x_k); the jet order stands in for components that vanish at it"""
        return min(value.ord_low() for value in self.values)

    def render(self) -> str:
        return "(" + ", ".join(value.render() for value in self.values) + ")"

    def __str__(self) -> str:
        return self.render()


class JetSpace:
    """All jets mod m^order of n unknowns in N series variables over F_q"""

    def __init__(self, num_series_vars: int, num_unknowns: int, order: int,
                 descriptor: FieldDescriptor):
        """
        Args:
            num_series_vars: N
            num_unknowns: n
            order: Jet order c; components are known modulo m^c
            descriptor: A prime field
        """
        if not descriptor.is_prime:
            raise BadParameters("jets can only be enumerated over a finite field")
        if order < 1:
            raise BadParameters("jet order must be at least 1")
        self.num_series_vars = num_series_vars
        self.num_unknowns = num_unknowns
        self.order = order
        self.descriptor = descriptor
        self.monomials = monomials_below(num_series_vars, order)

    @property
    def slots(self) -> int:
        """Number of free coefficients in one jet"""
        return self.num_unknowns * len(self.monomials)

    def estimate_count(self) -> int:
        return self.descriptor.characteristic ** self.slots

    def check_budget(self, budget: int) -> int:
        count = self.estimate_count()
        if count > budget:
            raise BudgetExceeded(
                f"{count} jets mod m^{self.order} exceed the enumeration budget of {budget}")
        logger.info("enumerating %d jets (%d slots over %s)", count, self.slots, self.descriptor)
        return count

    def _jet_from_digits(self, digits: Sequence[int]) -> Jet:
        width = len(self.monomials)
        values = []
        for j in range(self.num_unknowns):
            chunk = digits[j * width:(j + 1) * width]
            terms = {mono: c for mono, c in zip(self.monomials, chunk) if c}
            values.append(GradedSeries(self.descriptor, self.num_series_vars, terms, self.order))
        return Jet(tuple(values), self.order)

    def jet_at(self, index: int) -> Jet:
        """The index-th jet in canonical order (first slot most significant)"""
        q = self.descriptor.characteristic
        digits = [0] * self.slots
        for position in range(self.slots - 1, -1, -1):
            index, digits[position] = divmod(index, q)
        if index:
            raise IndexError("jet index out of range")
        return self._jet_from_digits(digits)

    def generate(self) -> Iterator[Jet]:
        """Yield every jet in canonical order"""
        for digits in itertools.product(range(self.descriptor.characteristic), repeat=self.slots):
            yield self._jet_from_digits(digits)

    def generate_block(self, start: int, stop: int) -> Iterator[Tuple[int, Jet]]:
        for index in range(start, stop):
            yield index, self.jet_at(index)

    def blocks(self, jobs: int) -> List[Tuple[int, int]]:
        """Split [0, count) into contiguous index ranges, one or more per worker"""
        count = self.estimate_count()
        pieces = max(1, min(count, 4 * jobs))
        size, extra = divmod(count, pieces)
        ranges = []
        start = 0
        for piece in range(pieces):
            stop = start + size + (1 if piece < extra else 0)
            ranges.append((start, stop))
            start = stop
        return ranges


def homogeneous_choices(descriptor: FieldDescriptor, num_vars: int, degree: int,
                        pool: Optional[Sequence] = None) -> Iterator[GradedSeries]:
    """
    Enumerate homogeneous forms of one degree

    Coefficients run over the whole field for F_q, or over ``pool`` (required
    for the rationals). The zero form comes first.
    """
    if pool is None:
        if not descriptor.is_prime:
            raise BadParameters("a coefficient pool is required over the rationals")
        pool = range(descriptor.characteristic)
    monomials = monomials_of_degree(num_vars, degree)
    for coeffs in itertools.product(pool, repeat=len(monomials)):
        yield GradedSeries(descriptor, num_vars, dict(zip(monomials, coeffs)))


