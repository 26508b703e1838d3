"""
Solution-membership oracles

An oracle answers whether the class of a jet modulo m^order contains a true
solution of the system. Exact oracles encode a known solution set; the
horizon oracle only tests liftability to a finite order and is flagged
inexact.
"""

import logging
from typing import Iterable, List, Optional, Sequence

from .config import DEFAULT_LIFT_BUDGET
from .error import BadParameters, BudgetExceeded
from .jetspace import Jet, homogeneous_choices
from .series import GradedSeries, monomials_of_degree
from .system import PolySystem


logger = logging.getLogger(__name__)


class MembershipOracle:
    """Base membership oracle"""

    name = "base"
    exact = True

    def check_arity(self, num_unknowns: int):
        """Raise BadParameters when the oracle reads a component the system lacks"""
        width = self.components_needed()
        if width > num_unknowns:
            raise BadParameters(f"{self.name} oracle reads {width} unknowns, "
                                f"the system has {num_unknowns}")

    def components_needed(self) -> int:
        return 0

    def contains(self, system: PolySystem, jet: Jet, order: int) -> bool:
        """True when some solution is congruent to jet modulo m^order"""
        return False


class ZeroOracle(MembershipOracle):
    """Solutions are the tuples vanishing on the selected components"""

    name = "zero"

    def __init__(self, components: Optional[Sequence[int]] = None):
        self.components = None if components is None else tuple(components)

    def components_needed(self) -> int:
        return 0 if not self.components else max(self.components) + 1

    def contains(self, system: PolySystem, jet: Jet, order: int) -> bool:
        indices = range(len(jet.values)) if self.components is None else self.components
        return all(jet.values[j].truncate(order).is_zero_mod(order) for j in indices)


class EmptyOracle(MembershipOracle):
    """The system has no solution at all"""

    name = "empty"


class SquareBranchOracle(MembershipOracle):
    """
    Solutions of X^2 - Z*Y^2 with Z a square: z = t^2 and x = t*y

    The class contains such a solution exactly when some t mod m^order has
    t^2 = z and t*y = x modulo m^order. The search fixes t one homogeneous
    component at a time; t up to degree e decides both congruences modulo
    m^(e+1), which prunes the search.
    """

    name = "square-branch"

    def __init__(self, x_index: int = 0, y_index: int = 1, z_index: int = 2):
        self.x_index = x_index
        self.y_index = y_index
        self.z_index = z_index

    def components_needed(self) -> int:
        return max(self.x_index, self.y_index, self.z_index) + 1

    def contains(self, system: PolySystem, jet: Jet, order: int) -> bool:
        if not jet.descriptor.is_prime:
            raise BadParameters("square branch search needs a finite field")
        x = jet.values[self.x_index].truncate(order)
        y = jet.values[self.y_index].truncate(order)
        z = jet.values[self.z_index].truncate(order)
        start = GradedSeries.zero(jet.descriptor, z.num_vars)
        return self._extend(start, 0, order, x, y, z)

    def _extend(self, t: GradedSeries, degree: int, order: int,
                x: GradedSeries, y: GradedSeries, z: GradedSeries) -> bool:
        if degree == order:
            return True
        bound = degree + 1
        for component in homogeneous_choices(t.descriptor, t.num_vars, degree):
            candidate = t.add(component)
            if not candidate.mul(candidate).sub(z).truncate(bound).is_zero_mod(bound):
                continue
            if not candidate.mul(y).sub(x).truncate(bound).is_zero_mod(bound):
                continue
            if self._extend(candidate, degree + 1, order, x, y, z):
                return True
        return False


class AnyOracle(MembershipOracle):
    """Union of solution sets"""

    name = "any"

    def __init__(self, oracles: Iterable[MembershipOracle] = ()):
        self.oracles: List[MembershipOracle] = list(oracles)

    def add_oracle(self, oracle: MembershipOracle):
        self.oracles.append(oracle)

    def components_needed(self) -> int:
        return max((oracle.components_needed() for oracle in self.oracles), default=0)

    @property
    def exact(self) -> bool:
        return all(oracle.exact for oracle in self.oracles)

    def contains(self, system: PolySystem, jet: Jet, order: int) -> bool:
        return any(oracle.contains(system, jet, order) for oracle in self.oracles)


class HorizonLiftOracle(MembershipOracle):
    """
    Heuristic: the class lifts to a jet on which the system vanishes mod m^horizon

    Every class holding a true solution passes, so jets it rejects are
    genuinely far from solutions and bounds built on it are lower bounds.
    """

    name = "horizon"
    exact = False

    def __init__(self, horizon: int, budget: int = DEFAULT_LIFT_BUDGET):
        self.horizon = horizon
        self.budget = budget
        self._visited = 0

    def contains(self, system: PolySystem, jet: Jet, order: int) -> bool:
        if not jet.descriptor.is_prime:
            raise BadParameters("lifting search needs a finite field")
        if self.horizon < order:
            raise BadParameters(f"horizon {self.horizon} below the tested order {order}")
        values = [value.truncate(order).exact() for value in jet.values]
        if not system.vanishes_mod(values, order):
            return False
        self._visited = 0
        found = self._lift(system, values, order)
        logger.debug("horizon lift from order %d: %s after %d nodes", order, found, self._visited)
        return found

    def _lift(self, system: PolySystem, values: List[GradedSeries], degree: int) -> bool:
        if degree >= self.horizon:
            return True
        descriptor = values[0].descriptor
        num_vars = values[0].num_vars
        width = len(monomials_of_degree(num_vars, degree))
        q = descriptor.characteristic
        bound = degree + 1
        for number in range(q ** (width * len(values))):
            self._visited += 1
            if self._visited > self.budget:
                raise BudgetExceeded(f"lifting search passed its budget of {self.budget} nodes")
            lifted = []
            rest = number
            for value in values:
                rest, digits = divmod(rest, q ** width)
                lifted.append(value.add(_form_from_digits(descriptor, num_vars, degree, digits)))
            if system.vanishes_mod(lifted, bound) and self._lift(system, lifted, bound):
                return True
        return False


def _form_from_digits(descriptor, num_vars: int, degree: int, digits: int) -> GradedSeries:
    q = descriptor.characteristic
    terms = {}
    for monomial in monomials_of_degree(num_vars, degree):
        digits, terms[monomial] = divmod(digits, q)
    return GradedSeries(descriptor, num_vars, terms)


def create_oracle(name: str, horizon: Optional[int] = None,
                  budget: int = DEFAULT_LIFT_BUDGET) -> MembershipOracle:
    """
    Create a membership oracle by name

    Names: ``zero``, ``empty``, ``square-branch``, ``square-or-zero`` (the
    solution set of X^2 - Z*Y^2: x = y = 0 or z = t^2, x = t*y) and
    ``horizon`` (needs a horizon).
    """
    if name == "zero":
        return ZeroOracle()
    if name == "empty":
        return EmptyOracle()
    if name == "square-branch":
        return SquareBranchOracle()
    if name == "square-or-zero":
        return AnyOracle([ZeroOracle(components=(0, 1)), SquareBranchOracle()])
    if name == "horizon":
        if horizon is None:
            raise BadParameters("the horizon oracle needs a horizon")
        return HorizonLiftOracle(horizon, budget)
    raise BadParameters(f"Unknown oracle: {name}")


ORACLE_NAMES = ["zero", "empty", "square-branch", "square-or-zero", "horizon"]
