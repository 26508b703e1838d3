"""
Artin function experiments

Brute-force Artin functions on jet spaces over small prime fields, the
square-obstruction certificate sup_t ord(z_p - t^2) = p, and the quadratic
lower-bound witnesses for P = X^2 - Z*Y^2 in two series variables.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.matrices import DomainMatrix

from .config import DEFAULT_JET_BUDGET, DEFAULT_LIFT_BUDGET, DEFAULT_SEARCH_BUDGET
from .construction import RATIONALS, CounterexampleTriple, build_triple, z_series
from .diophantine import AffineFit, fit_affine
from .error import (BadParameters, BadParity, BudgetExceeded, CharTwo, MixedFields, NoSuchB,
                    NotASquareLeadingForm, SearchBudgetExceeded)
from .fields import FieldDescriptor
from .jetspace import Jet, JetSpace, homogeneous_choices
from .oracles import HorizonLiftOracle, MembershipOracle, create_oracle
from .parser import parse_poly
from .series import INFINITY, GradedSeries, Order, monomials_of_degree
from .system import PolySystem


logger = logging.getLogger(__name__)

# Coefficients tried by the exhaustive square search over Q
RATIONAL_POOL = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
                 Fraction(1, 2), Fraction(-1, 2))

BetaTable = Union[Callable[[int], Order], Mapping[int, Order]]


# Order inequality


@dataclass(frozen=True)
class OrderViolation:
    """A sample with ord f(x) > beta(min_k ord x_k)"""

    index: int
    jet: Jet
    ord_f: Order
    min_ord: Order
    bound: Order


def _beta_at(beta: BetaTable, argument: int) -> Order:
    if callable(beta):
        return beta(argument)
    if argument not in beta:
        raise BadParameters(f"beta table has no entry for {argument}")
    return beta[argument]


def find_order_violation(system: PolySystem, samples: Sequence[Jet],
                         beta: BetaTable) -> Optional[OrderViolation]:
    """
    First sample breaking ord f(x) <= beta(min_k ord x_k)

    The system is expected to have the origin as its only zero; samples at
    which f vanishes identically are skipped.
    """
    for index, jet in enumerate(samples):
        ord_f = system.order_at(jet.values)
        if ord_f == INFINITY:
            continue
        min_ord = jet.min_order()
        if min_ord == INFINITY:
            continue
        bound = _beta_at(beta, int(min_ord))
        if ord_f > bound:
            logger.info("sample %d: ord f = %s exceeds beta(%s) = %s", index, ord_f, min_ord, bound)
            return OrderViolation(index, jet, ord_f, min_ord, bound)
    return None


def check_order_inequality(system: PolySystem, samples: Sequence[Jet], beta: BetaTable) -> bool:
    return find_order_violation(system, samples, beta) is None


# Square obstruction


@dataclass(frozen=True)
class ObstructionCertificate:
    """
    t with ord(z_p - t^2) = max_order that no homogeneous correction improves

    obstruction_degree is the degree of the correction h whose linear system
    2*lowest(t)*h = lowest(z_p - t^2) has no solution.
    """

    p: int
    descriptor: FieldDescriptor
    max_order: int
    best_t: GradedSeries
    obstruction_degree: int
    residual_form: GradedSeries

    def verify(self) -> bool:
        """Recompute the order and the infeasibility of the lifting system"""
        residual = z_series(self.p, self.descriptor).sub(self.best_t.mul(self.best_t))
        if residual.ord() != self.max_order:
            return False
        correction = _solve_lifting(self.best_t.lowest_form(), residual.lowest_form(),
                                    self.obstruction_degree)
        return correction is None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "field": self.descriptor.label,
            "max_order": self.max_order,
            "best_t": self.best_t.render(),
            "obstruction_degree": self.obstruction_degree,
            "residual_form": self.residual_form.render(),
        }


def _solve_lifting(t_low: GradedSeries, target: GradedSeries,
                   degree: int) -> Optional[GradedSeries]:
    """
    Homogeneous h of the given degree with 2*t_low*h = target, or None

    Solved by row reduction over the coefficient field; the system is
    inconsistent exactly when the augmented column holds a pivot.
    """
    descriptor = t_low.descriptor
    num_vars = t_low.num_vars
    unknowns = monomials_of_degree(num_vars, degree)
    equations = monomials_of_degree(num_vars, degree + int(t_low.ord()))
    row_of = {mono: r for r, mono in enumerate(equations)}
    rows = [[descriptor.zero_value] * (len(unknowns) + 1) for _ in equations]
    two = descriptor.reduce(2)
    for col, mono in enumerate(unknowns):
        for exps, coeff in t_low.raw_terms().items():
            target_mono = tuple(a + b for a, b in zip(exps, mono))
            r = row_of[target_mono]
            rows[r][col] = descriptor.reduce(rows[r][col] + two * coeff)
    for exps, coeff in target.raw_terms().items():
        if exps not in row_of:
            return None
        rows[row_of[exps]][-1] = coeff
    domain = descriptor.domain
    matrix = DomainMatrix([[descriptor.to_domain(v) for v in row] for row in rows],
                          (len(equations), len(unknowns) + 1), domain)
    reduced, pivots = matrix.rref()
    if len(unknowns) in pivots:
        return None
    dense = reduced.to_Matrix()
    terms = {unknowns[col]: descriptor.from_sympy(dense[r, len(unknowns)])
             for r, col in enumerate(pivots)}
    return GradedSeries(descriptor, num_vars, terms)


def _leading_root(z: GradedSeries) -> GradedSeries:
    lowest = z.lowest_form()
    if len(lowest) != 1:
        raise NotASquareLeadingForm(f"leading form {lowest} is not a monomial")
    (exps, coeff), = lowest.raw_terms().items()
    root = z.descriptor.sqrt_value(coeff)
    if root is None or any(e % 2 for e in exps):
        raise NotASquareLeadingForm(f"leading form {lowest} is not a square")
    return GradedSeries.monomial(z.descriptor, [e // 2 for e in exps], root)


def square_obstruction(p: int, descriptor: FieldDescriptor = RATIONALS,
                       max_search_order: Optional[int] = None) -> ObstructionCertificate:
    """
    Greedy homogeneous lifting of a square root of z_p = T1^2 + T2^p

    Starting from the root of the leading form, each step adds the homogeneous
    correction that kills the lowest form of z_p - t^2. The first degree at
    which no correction exists is the certified supremum.

    Raises:
        SearchBudgetExceeded: the residual order reached max_search_order
    """
    if descriptor.characteristic == 2:
        raise CharTwo("square roots need 2 to be invertible")
    if p <= 2:
        raise BadParameters(f"need p > 2, got p={p}")
    if max_search_order is None:
        max_search_order = p + 2
    if max_search_order <= p:
        raise BadParameters(f"max_search_order must exceed p={p}")
    z = z_series(p, descriptor)
    t = _leading_root(z)
    t_low = t.lowest_form()
    while True:
        residual = z.sub(t.mul(t))
        if not len(residual):
            raise SearchBudgetExceeded(f"z_{p} is an exact square over {descriptor}")
        order = int(residual.ord())
        if order >= max_search_order:
            raise SearchBudgetExceeded(
                f"residual order {order} reached the search bound {max_search_order}")
        form = residual.lowest_form()
        degree = order - int(t_low.ord())
        correction = _solve_lifting(t_low, form, degree)
        if correction is None:
            logger.info("square obstruction p=%d over %s: max order %d", p, descriptor, order)
            return ObstructionCertificate(p=p, descriptor=descriptor, max_order=order,
                                          best_t=t, obstruction_degree=degree,
                                          residual_form=form)
        logger.debug("lifting: order %d, correction %s", order, correction)
        t = t.add(correction)


@dataclass(frozen=True)
class SquareSearchResult:
    """Largest ord(z_p - t^2) over every t of degree <= degree_bound"""

    max_order: Order
    best_t: GradedSeries
    candidates: int


def exhaustive_square_search(p: int, descriptor: FieldDescriptor = RATIONALS,
                             degree_bound: Optional[int] = None,
                             budget: int = DEFAULT_SEARCH_BUDGET,
                             pool: Optional[Sequence] = None) -> SquareSearchResult:
    """
    Exhaustive search for sup ord(z_p - t^2) over polynomials t

    t is fixed one homogeneous component at a time. Once t is fixed up to
    degree e, t^2 is known modulo m^(e+2) (or ord(z_p - t^2) = 0 when t has a
    constant term), so a residual order below e+2 is final for the whole
    subtree. Over Q the coefficients run over ``pool`` (RATIONAL_POOL by
    default); over F_q over the whole field.
    """
    if p <= 2:
        raise BadParameters(f"need p > 2, got p={p}")
    if degree_bound is None:
        degree_bound = p + 1
    if pool is None and not descriptor.is_prime:
        pool = RATIONAL_POOL
    z = z_series(p, descriptor)
    state = {"best": -1, "best_t": GradedSeries.zero(descriptor, 2), "count": 0}

    def record(order, t):
        if order > state["best"]:
            state["best"], state["best_t"] = order, t

    def visit(prefix: GradedSeries, degree: int):
        for component in homogeneous_choices(descriptor, 2, degree, pool):
            state["count"] += 1
            if state["count"] > budget:
                raise SearchBudgetExceeded(f"square search passed {budget} candidates")
            t = prefix.add(component)
            order = z.sub(t.mul(t)).ord()
            if order < degree + 2 or degree == degree_bound:
                record(order, t)
            else:
                visit(t, degree + 1)

    visit(GradedSeries.zero(descriptor, 2), 0)
    logger.info("exhaustive square search p=%d over %s: max order %s after %d candidates",
                p, descriptor, state["best"], state["count"])
    return SquareSearchResult(state["best"], state["best_t"], state["count"])


# Brute-force Artin function


@dataclass
class BetaRecord:
    """Result of one brute-force Artin function evaluation"""

    system: str
    field: str
    i: int
    beta_lower: int
    beta_exact: Optional[int]
    exact_flag: bool
    horizon: int
    jet_order: int
    witness: Optional[Jet] = None
    jets: int = 0
    timing_ms: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "field": self.field,
            "i": self.i,
            "beta_lower": self.beta_lower,
            "beta_exact": self.beta_exact,
            "exact_flag": self.exact_flag,
            "horizon": self.horizon,
            "witness": None if self.witness is None else self.witness.render(),
            "timing_ms": self.timing_ms,
        }


def _scan_block(args) -> Tuple[int, Optional[int]]:
    # Largest capped ord f over the block's jets whose class mod m^(i+1) holds no solution
    system, space, oracle, i, start, stop = args
    best, best_index = -1, None
    verdicts: Dict[Tuple, bool] = {}
    for index, jet in space.generate_block(start, stop):
        ord_f = system.order_low_at(jet.values, space.order)
        if ord_f <= best:
            continue
        key = jet.truncate(i + 1).key()
        if key not in verdicts:
            verdicts[key] = oracle.contains(system, jet, i + 1)
        if not verdicts[key]:
            best, best_index = ord_f, index
            if best >= space.order:
                break
    return best, best_index


def beta_bruteforce(system: PolySystem, i: int, descriptor: Optional[FieldDescriptor] = None,
                    jet_order: Optional[int] = None, horizon: Optional[int] = None,
                    membership_oracle: Optional[MembershipOracle] = None,
                    budget: int = DEFAULT_JET_BUDGET, lift_budget: int = DEFAULT_LIFT_BUDGET,
                    jobs: int = 1, timing: bool = False) -> BetaRecord:
    """
    Smallest B such that every jet with ord f >= B+1 lies within m^(i+1) of a solution

    Jets run over all tuples modulo m^jet_order. A jet is near a solution when
    the membership oracle accepts its class modulo m^(i+1); without an oracle
    the horizon lifting test is used and only a lower bound is reported.

    Raises:
        BadParameters: the oracle reads more unknowns than the system has
        BudgetExceeded: the jet space is larger than budget
        NoSuchB: a bad jet vanishes to the jet order, so beta >= jet_order
    """
    descriptor = descriptor or system.descriptor
    if descriptor != system.descriptor:
        raise MixedFields(f"system over {system.descriptor}, enumeration over {descriptor}")
    if i < 0:
        raise BadParameters("i must be nonnegative")
    if jet_order is None:
        jet_order = i + 2
    if jet_order < i + 1:
        raise BadParameters(f"jet order {jet_order} must be at least i+1 = {i + 1}")
    if horizon is None:
        horizon = jet_order
    if horizon < jet_order:
        raise BadParameters(f"horizon {horizon} below the jet order {jet_order}")
    oracle = membership_oracle or HorizonLiftOracle(horizon, lift_budget)
    oracle.check_arity(system.num_unknowns)
    space = JetSpace(system.num_series_vars, system.num_unknowns, jet_order, descriptor)
    count = space.check_budget(budget)
    started = time.perf_counter()
    tasks = [(system, space, oracle, i, start, stop) for start, stop in space.blocks(jobs)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_scan_block, tasks))
    else:
        results = [_scan_block(task) for task in tasks]
    best, best_index = -1, None
    for ord_f, index in results:
        if ord_f > best:
            best, best_index = ord_f, index
    if best >= jet_order:
        raise NoSuchB(f"a jet far from every solution vanishes modulo m^{jet_order}; "
                      f"raise the jet order", beta_lower=jet_order)
    beta = max(0, best)
    elapsed = (time.perf_counter() - started) * 1000
    logger.info("beta(%d) for %s over %s: %d (%s)", i, system, descriptor, beta,
                "exact" if oracle.exact else "lower bound")
    return BetaRecord(
        system=system.render(),
        field=descriptor.label,
        i=i,
        beta_lower=beta,
        beta_exact=beta if oracle.exact else None,
        exact_flag=oracle.exact,
        horizon=horizon,
        jet_order=jet_order,
        witness=None if best_index is None else space.jet_at(best_index),
        jets=count,
        timing_ms=round(elapsed, 3) if timing else None,
    )


# Quadratic lower bound


@dataclass(frozen=True)
class QuadraticWitness:
    """
    Approximate solution of X^2 - Z*Y^2 far from every true solution

    (u_{p,k}, v_k, z_p) with k = (i+2)/2 and p = k-2 vanishes to order k^2-4,
    while a true solution congruent to it modulo m^(i+1) would make z_p
    congruent to a square modulo m^(i+1) (v_k is nonzero mod m^(i+1) as
    ord v_k <= i), which the square obstruction rules out since p < i+1.
    """

    i: int
    k: int
    p: int
    triple: CounterexampleTriple
    certificate: ObstructionCertificate
    lower_bound: int
    ordP_ok: bool
    obstruction_ok: bool
    ord_v_ok: bool

    @property
    def ordP(self) -> Order:
        return self.triple.p_value.ord_low()

    def holds(self) -> bool:
        return self.ordP_ok and self.obstruction_ok and self.ord_v_ok

    def to_row(self) -> dict:
        return {
            "i": self.i,
            "k": self.k,
            "p": self.p,
            "lower_bound": self.lower_bound,
            "ord_P": int(self.ordP),
            "max_square_order": self.certificate.max_order,
            "ord_v": self.triple.ord_v,
            "status": "pass" if self.holds() else "fail",
        }


def quadratic_witness(i: int, descriptor: FieldDescriptor = RATIONALS) -> QuadraticWitness:
    """
    Witness for beta_2(i) >= ((i+2)/2)^2 - 5 at an even i >= 8

    Raises:
        BadParity: i is odd (quadratic_lower_bound handles odd i through i-1)
    """
    if i % 2:
        raise BadParity(f"i={i} is odd; the witness exists for i-1")
    k = (i + 2) // 2
    if k <= 4:
        raise BadParameters(f"need i >= 8, got i={i}")
    p = k - 2
    triple = build_triple(p, k, descriptor)
    certificate = square_obstruction(p, descriptor)
    target = k * k - 4
    witness = QuadraticWitness(
        i=i, k=k, p=p,
        triple=triple,
        certificate=certificate,
        lower_bound=target - 1,
        ordP_ok=triple.p_value.ord_low() >= target,
        obstruction_ok=certificate.max_order == p and p < i + 1,
        ord_v_ok=triple.ord_v == 2 * k - 3 and triple.ord_v <= i,
    )
    logger.info("witness i=%d: ord P >= %d %s, sup ord(z - t^2) = %d, ord v = %d",
                i, target, witness.ordP_ok, certificate.max_order, triple.ord_v)
    return witness


def quadratic_lower_bound(i: int) -> Fraction:
    """
    Lower bound for beta_2(i)

    ((i+2)/2)^2 - 5 for even i; for odd i the bound (i/2)^2 - 5 follows from
    the even witness at i-1 since beta is nondecreasing.
    """
    if i < 8:
        raise BadParameters(f"need i >= 8, got i={i}")
    if i % 2 == 0:
        return Fraction((i + 2) * (i + 2), 4) - 5
    return Fraction(i * i, 4) - 5


# Greenberg regime


GREENBERG_SYSTEMS = (
    # text, unknowns, oracle, jet order that decides beta(i)
    ("X", 1, "zero", lambda i: i + 1),
    ("X^2 - T", 1, "empty", lambda i: max(2, i + 1)),
    ("X^2 - T*Y^2", 2, "zero", lambda i: 2 * i + 2),
)


@dataclass(frozen=True)
class GreenbergRow:
    system: str
    i: int
    jet_order: int
    beta: Optional[int]
    beta_lower: int
    exact: bool


@dataclass
class GreenbergReport:
    """Brute-forced beta(i) for one-variable systems and their affine fits"""

    rows: List[GreenbergRow] = field(default_factory=list)
    fits: Dict[str, AffineFit] = field(default_factory=dict)

    def affine_bounded(self) -> bool:
        """Every row, exact or lower bound, sits under its system's fitted line"""
        for row in self.rows:
            fit = self.fits.get(row.system)
            if fit is not None and row.beta_lower > fit(row.i):
                return False
        return True


def greenberg_contrast(descriptor: FieldDescriptor, max_i: int = 3, max_jet_order: int = 5,
                       budget: int = DEFAULT_JET_BUDGET, jobs: int = 1) -> GreenbergReport:
    """
    beta(i) for X, X^2 - T and X^2 - T*Y^2 in one series variable

    Each i is computed at the smallest jet order deciding it, capped at
    max_jet_order; where the cap is too low only a lower bound is recorded.
    """
    report = GreenbergReport()
    for text, unknowns, oracle_name, needed in GREENBERG_SYSTEMS:
        system = parse_poly(text, 1, unknowns, descriptor)
        points = []
        for i in range(max_i + 1):
            jet_order = min(needed(i), max_jet_order)
            if jet_order < i + 1:
                break
            try:
                record = beta_bruteforce(system, i, jet_order=jet_order,
                                         membership_oracle=create_oracle(oracle_name),
                                         budget=budget, jobs=jobs)
            except NoSuchB as exc:
                report.rows.append(GreenbergRow(text, i, jet_order, None, exc.beta_lower, False))
                continue
            except BudgetExceeded:
                logger.warning("%s: jet space for i=%d exceeds the budget", text, i)
                break
            report.rows.append(GreenbergRow(text, i, jet_order, record.beta_exact,
                                            record.beta_lower, True))
            points.append((i, record.beta_exact))
        if len(points) >= 2:
            report.fits[text] = fit_affine(points)
    return report
