"""
Explicit counterexample objects

Square roots by Newton iteration, the root x_p of X^2 - (T1^2 + T2^p), its
truncations x_{p,k} = u_{p,k} / v_k and the triples (u_{p,k}, v_k, z_p) whose
image under P = X^2 - Z*Y^2 has order (p+2)k - 4.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from .error import (BadParameters, CharTwo, IndeterminateOrder, NotASquareLeadingForm,
                    PrecisionIncrease, PrecisionTooLow)
from .fields import FieldDescriptor, binomial_half
from .series import GradedSeries, SeriesFraction


logger = logging.getLogger(__name__)

RATIONALS = FieldDescriptor.rationals()


class Regime(Enum):
    """Whether an order identity is asserted with equality or as a lower bound"""
    EQ = "eq"
    GEQ = "geq"


def check_parameters(p: int, k: int) -> None:
    if p <= 2 or k <= 2:
        raise BadParameters(f"need p > 2 and k > 2, got p={p}, k={k}")


def default_precision(p: int, k: int, guard: int = 2) -> int:
    """Largest asserted order plus guard degrees"""
    return (p + 2) * k - 4 + guard


def coefficient_regime(p: int, k: int, descriptor: FieldDescriptor = RATIONALS) -> Regime:
    """Equality holds exactly when a_k survives in the field"""
    return Regime.EQ if binomial_half(k, descriptor) else Regime.GEQ


# Explicit series


def z_series(p: int, descriptor: FieldDescriptor = RATIONALS) -> GradedSeries:
    """z_p = T1^2 + T2^p"""
    return GradedSeries(descriptor, 2, {(2, 0): 1, (0, p): 1})


def v_series(k: int, descriptor: FieldDescriptor = RATIONALS) -> GradedSeries:
    """v_k = T1^(2k-3)"""
    return GradedSeries.monomial(descriptor, (2 * k - 3, 0))


def u_series(p: int, k: int, descriptor: FieldDescriptor = RATIONALS) -> GradedSeries:
    """u_{p,k} = sum_{i<k} a_i T1^(2k-2-2i) T2^(ip)"""
    terms = {(2 * k - 2 - 2 * i, i * p): binomial_half(i, descriptor) for i in range(k)}
    return GradedSeries(descriptor, 2, terms)


def x_pk_series(p: int, k: int, descriptor: FieldDescriptor = RATIONALS) -> GradedSeries:
    """x_{p,k} = T1 * sum_{i<k} a_i T2^(ip) / T1^(2i), Laurent graded"""
    terms = {(1 - 2 * i, i * p): binomial_half(i, descriptor) for i in range(k)}
    return GradedSeries(descriptor, 2, terms)


# Square roots


@dataclass(frozen=True)
class SqrtWitness:
    """root with root^2 = input modulo m^precision"""

    input: GradedSeries
    root: GradedSeries
    precision: int

    def residual(self) -> GradedSeries:
        return self.root.mul(self.root).sub(self.input).truncate(self.precision)

    def holds(self) -> bool:
        return self.residual().is_zero_mod(self.precision)


def _sqrt_unit(g: GradedSeries, target: int) -> GradedSeries:
    """Square root of a unit with constant term 1, r <- (r + g/r)/2"""
    descriptor = g.descriptor
    half = descriptor.inv_value(descriptor.reduce(2))
    r = GradedSeries.constant(descriptor, g.num_vars, 1, precision=1)
    reached = 1
    while reached < target:
        reached = min(2 * reached, target)
        r_exact = r.exact()
        quotient = g.truncate(reached).mul(r_exact.invert_unit(reached))
        r = r_exact.add(quotient).scale(half).truncate(reached)
        logger.debug("sqrt_newton: precision %d, %d terms", reached, len(r))
    return r


def sqrt_newton(f: GradedSeries, precision: int) -> SqrtWitness:
    """
    Square root of f = c*m^2*(1 + h) modulo m^precision

    The leading form of f must be a single term c*T^(2e) with c a square in
    the field. The root is normalized so that its lowest term carries the
    canonical square root of c, and it is known modulo m^(precision - deg m).
    """
    descriptor = f.descriptor
    if descriptor.characteristic == 2:
        raise CharTwo("square roots need 2 to be invertible")
    if f.precision is not None and f.precision < precision:
        raise PrecisionIncrease(f"input known modulo m^{f.precision}, root asked modulo m^{precision}")
    if f.ord_low() == float("inf"):
        return SqrtWitness(f, GradedSeries.zero(descriptor, f.num_vars), precision)
    lowest = f.lowest_form()
    if len(lowest) != 1:
        raise NotASquareLeadingForm(f"leading form {lowest} is not a monomial")
    (exps, coeff), = lowest.raw_terms().items()
    if any(e % 2 for e in exps):
        raise NotASquareLeadingForm(f"leading monomial {lowest} is not a square")
    root_coeff = descriptor.sqrt_value(coeff)
    if root_coeff is None:
        raise NotASquareLeadingForm(f"leading coefficient {coeff} is not a square in {descriptor}")
    half_exps = tuple(e // 2 for e in exps)
    degree = sum(half_exps)
    if precision <= 2 * degree:
        raise PrecisionTooLow(f"precision {precision} does not reach past the leading form")
    unit = f.truncate(precision).shift(tuple(-2 * e for e in half_exps)).scale(
        descriptor.inv_value(coeff))
    root = _sqrt_unit(unit, precision - 2 * degree).shift(half_exps).scale(root_coeff)
    return SqrtWitness(f, root, precision)


def root_xp(p: int, precision: int, descriptor: FieldDescriptor = RATIONALS) -> GradedSeries:
    """x_p = sqrt(T1^2 + T2^p) modulo m^precision"""
    return sqrt_newton(z_series(p, descriptor), precision + 1).root


# Example objects


def build_xpk(p: int, k: int, descriptor: FieldDescriptor = RATIONALS) -> SeriesFraction:
    """x_{p,k} as the fraction u_{p,k} / T1^(2k-3)"""
    check_parameters(p, k)
    return SeriesFraction(u_series(p, k, descriptor), v_series(k, descriptor))


def distance_to_root(p: int, k: int, precision: Optional[int] = None,
                     descriptor: FieldDescriptor = RATIONALS) -> int:
    """
    ord(x_p - x_{p,k}), which is (p-2)k + 1 whenever a_k is nonzero in the field

    Raises IndeterminateOrder when the difference vanishes at the working
    precision (possible over F_q once a_k reduces to zero).
    """
    check_parameters(p, k)
    bound = (p - 2) * k + 1
    if precision is None:
        precision = default_precision(p, k)
    if precision <= bound:
        raise PrecisionTooLow(f"precision {precision} must exceed {bound}")
    x_pk = build_xpk(p, k, descriptor).to_graded(precision)
    difference = root_xp(p, precision, descriptor).sub(x_pk)
    measured = int(difference.ord())
    if coefficient_regime(p, k, descriptor) is Regime.GEQ:
        logger.warning("a_%d vanishes in %s; ord(x_p - x_pk) only bounded below", k, descriptor)
    return measured


@dataclass(frozen=True)
class CounterexampleTriple:
    """(u_{p,k}, v_k, z_p) with the orders predicted and measured"""

    p: int
    k: int
    u: GradedSeries
    v: GradedSeries
    z: GradedSeries
    predicted_ordP: int
    predicted_min_uv_ord: int
    measured_ordP: Optional[int]
    ord_u: int
    ord_v: int
    regime: Regime
    precision: int
    p_value: GradedSeries

    @property
    def descriptor(self) -> FieldDescriptor:
        return self.u.descriptor

    @property
    def min_uv_ord(self) -> int:
        return min(self.ord_u, self.ord_v)

    def ordP_holds(self) -> bool:
        if self.measured_ordP is None:
            return self.regime is Regime.GEQ or self.precision <= self.predicted_ordP
        if self.regime is Regime.EQ:
            return self.measured_ordP == self.predicted_ordP
        return self.measured_ordP >= self.predicted_ordP

    def holds(self) -> bool:
        return self.ordP_holds() and self.min_uv_ord == self.predicted_min_uv_ord


def build_triple(p: int, k: int, descriptor: FieldDescriptor = RATIONALS,
                 precision: Optional[int] = None) -> CounterexampleTriple:
    """Build (u_{p,k}, v_k, z_p) and measure ord(u^2 - z*v^2) modulo m^precision"""
    check_parameters(p, k)
    predicted = (p + 2) * k - 4
    if precision is None:
        precision = default_precision(p, k)
    if precision <= predicted:
        raise PrecisionTooLow(f"precision {precision} must exceed {predicted}")
    u = u_series(p, k, descriptor)
    v = v_series(k, descriptor)
    z = z_series(p, descriptor)
    p_value = u.mul(u).sub(z.mul(v).mul(v)).truncate(precision)
    measured = int(p_value.ord()) if len(p_value) else None
    regime = coefficient_regime(p, k, descriptor)
    logger.info("triple p=%d k=%d over %s: ord P measured %s, predicted %d (%s)",
                p, k, descriptor, measured, predicted, regime.value)
    return CounterexampleTriple(
        p=p, k=k, u=u, v=v, z=z,
        predicted_ordP=predicted,
        predicted_min_uv_ord=2 * k - 3,
        measured_ordP=measured,
        ord_u=int(u.ord()),
        ord_v=int(v.ord()),
        regime=regime,
        precision=precision,
        p_value=p_value,
    )


def factorization_residual(triple: CounterexampleTriple,
                           precision: Optional[int] = None) -> GradedSeries:
    """u^2 - z*v^2 - (x_{p,k} - x_p)(x_{p,k} + x_p) v^2 modulo m^precision"""
    if precision is None:
        precision = triple.precision
    p, k, descriptor = triple.p, triple.k, triple.descriptor
    root_precision = max(2, precision - 4 * k + 5)
    x_p = root_xp(p, root_precision, descriptor)
    x_pk = x_pk_series(p, k, descriptor)
    rhs = x_pk.sub(x_p).mul(x_pk.add(x_p)).mul(triple.v).mul(triple.v)
    lhs = triple.u.mul(triple.u).sub(triple.z.mul(triple.v).mul(triple.v))
    return lhs.sub(rhs).truncate(precision)


def _triple_task(args):
    p, k, descriptor, guard = args
    return build_triple(p, k, descriptor, default_precision(p, k, guard))


def sweep_triples(ps: Sequence[int], ks: Sequence[int],
                  descriptor: FieldDescriptor = RATIONALS,
                  guard: int = 2, jobs: int = 1) -> List[CounterexampleTriple]:
    """Triples for every (p, k), in (p, k) order regardless of worker count"""
    tasks = [(p, k, descriptor, guard) for p in ps for k in ks]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_triple_task, tasks))
    return [_triple_task(task) for task in tasks]
