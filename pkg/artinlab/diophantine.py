"""
Diophantine approximation in the completed valuation ring

Measures how well u_{p,k}/v_k approximates the root x_p, fits the measured
orders to affine laws in exact arithmetic and checks the inequalities that
link approximation quality to the order of P(u, v, z).
"""

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .construction import (RATIONALS, Regime, check_parameters, coefficient_regime,
                           default_precision, distance_to_root, root_xp, u_series,
                           v_series, x_pk_series, z_series)
from .error import BadParameters, IndeterminateOrder
from .fields import FieldDescriptor
from .series import INFINITY, GradedSeries


logger = logging.getLogger(__name__)

CSV_COLUMNS = ["p", "k", "ord_v", "ord_distance", "slope_pred_num", "slope_pred_den", "regime",
               "distance_exact"]


@dataclass(frozen=True)
class ApproximationRecord:
    """
    One measured approximation ord(x_p - u_{p,k}/v_k) against ord(v_k)

    distance_exact is False when the difference vanished at the working
    precision; ord_distance is then that precision, a lower bound.
    """

    p: int
    k: int
    ord_v: int
    ord_distance: int
    slope_pred: Fraction
    intercept_pred: Fraction
    regime: Regime = Regime.EQ
    distance_exact: bool = True

    @property
    def predicted_distance(self) -> Fraction:
        return self.slope_pred * self.ord_v + self.intercept_pred

    def matches_prediction(self) -> bool:
        if self.regime is Regime.EQ:
            return self.ord_distance == self.predicted_distance
        return self.ord_distance >= self.predicted_distance

    def to_row(self) -> Dict[str, Union[int, str]]:
        return {
            "p": self.p,
            "k": self.k,
            "ord_v": self.ord_v,
            "ord_distance": self.ord_distance,
            "slope_pred_num": self.slope_pred.numerator,
            "slope_pred_den": self.slope_pred.denominator,
            "regime": self.regime.value,
            "distance_exact": self.distance_exact,
        }


@dataclass(frozen=True)
class AffineFit:
    """y ~ a*x + b with the largest absolute residual"""

    a: Fraction
    b: Fraction
    residual_max: Fraction

    def __call__(self, x) -> Fraction:
        return self.a * x + self.b

    def is_exact(self) -> bool:
        return self.residual_max == 0


def measure_record(p: int, k: int, descriptor: FieldDescriptor = RATIONALS,
                   precision: Optional[int] = None) -> ApproximationRecord:
    """
    Measure ord(v_k) and ord(x_p - x_{p,k})

    When a_k vanishes in the field the difference may vanish modulo
    m^precision; the record then carries the precision as a lower bound.
    """
    check_parameters(p, k)
    if precision is None:
        precision = default_precision(p, k)
    regime = coefficient_regime(p, k, descriptor)
    ord_v = int(v_series(k, descriptor).ord())
    distance_exact = True
    try:
        ord_distance = distance_to_root(p, k, precision, descriptor)
    except IndeterminateOrder:
        if regime is Regime.EQ:
            raise
        ord_distance, distance_exact = precision, False
        logger.info("p=%d k=%d over %s: distance vanishes modulo m^%d", p, k, descriptor, precision)
    return ApproximationRecord(
        p=p, k=k,
        ord_v=ord_v,
        ord_distance=ord_distance,
        slope_pred=Fraction(p, 2) - 1,
        intercept_pred=Fraction(3 * p, 2) - 2,
        regime=regime,
        distance_exact=distance_exact,
    )


def fit_affine(points: Sequence[Tuple[int, int]]) -> AffineFit:
    """Least-squares line through integer points, solved exactly over Q"""
    if len(points) < 2:
        raise BadParameters("an affine fit needs at least two points")
    n = len(points)
    sx = sum(Fraction(x) for x, _ in points)
    sy = sum(Fraction(y) for _, y in points)
    sxx = sum(Fraction(x) * x for x, _ in points)
    sxy = sum(Fraction(x) * y for x, y in points)
    det = n * sxx - sx * sx
    if det == 0:
        raise BadParameters("degenerate input: all x values are equal")
    a = (n * sxy - sx * sy) / det
    b = (sy - a * sx) / n
    residual = max(abs(Fraction(y) - (a * x + b)) for x, y in points)
    return AffineFit(a=a, b=b, residual_max=residual)


def norm_constants(fit: AffineFit) -> Tuple[Fraction, Fraction]:
    """
    Constants (c, log K) of the norm form |x - u/v| = K |v|^c

    With |y| = exp(-ord y), ord(x - u/v) = a*ord(v) + b reads
    |x - u/v| = exp(-b) |v|^a.
    """
    return fit.a, -fit.b


def _record_task(args):
    p, k, descriptor, guard = args
    return measure_record(p, k, descriptor, default_precision(p, k, guard))


def liouville_table(ps: Iterable[int], ks: Iterable[int],
                    descriptor: FieldDescriptor = RATIONALS,
                    guard: int = 2, jobs: int = 1) -> List[ApproximationRecord]:
    """Records for every (p, k), in (p, k) order"""
    tasks = [(p, k, descriptor, guard) for p in ps for k in ks]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_record_task, tasks))
    return [_record_task(task) for task in tasks]


def fits_by_p(records: Iterable[ApproximationRecord]) -> Dict[int, AffineFit]:
    """Affine fit of ord_distance against ord_v for each p, equality regime only"""
    grouped: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for record in records:
        if record.regime is Regime.EQ:
            grouped[record.p].append((record.ord_v, record.ord_distance))
    return {p: fit_affine(points) for p, points in sorted(grouped.items()) if len(points) >= 2}


def gamma_profile(records: Iterable[ApproximationRecord]) -> Dict[int, Dict[int, int]]:
    """Measured approximation orders per p: ord_v -> best ord_distance seen"""
    profile: Dict[int, Dict[int, int]] = defaultdict(dict)
    for record in records:
        if not record.distance_exact:
            continue
        row = profile[record.p]
        row[record.ord_v] = max(row.get(record.ord_v, record.ord_distance), record.ord_distance)
    return {p: dict(sorted(row.items())) for p, row in sorted(profile.items())}


@dataclass(frozen=True)
class BridgeEvaluation:
    """
    Series attached to one approximation u/v of a root y of Q(X) = X^2 - z

    q_value is Q(u/v), p_value is P(u, v, z) = v^2 Q(u/v) and cofactor is
    the other factor u/v + y of Q(u/v) = (u/v - y)(u/v + y).
    """

    q_value: GradedSeries
    p_value: GradedSeries
    cofactor: GradedSeries


def bridge_evaluation(p: int, k: int, descriptor: FieldDescriptor = RATIONALS,
                      precision: Optional[int] = None) -> BridgeEvaluation:
    check_parameters(p, k)
    if precision is None:
        precision = default_precision(p, k)
    u, v, z = u_series(p, k, descriptor), v_series(k, descriptor), z_series(p, descriptor)
    x_pk = x_pk_series(p, k, descriptor)
    q_value = x_pk.mul(x_pk).sub(z).truncate(precision)
    p_value = u.mul(u).sub(z.mul(v).mul(v)).truncate(precision)
    cofactor = x_pk.add(root_xp(p, precision, descriptor))
    return BridgeEvaluation(q_value=q_value, p_value=p_value, cofactor=cofactor)


def check_bridge_inequality(evaluation: BridgeEvaluation, distance, d: int,
                            ord_v: int) -> bool:
    """
    ord Q(u/v) >= distance + ord(cofactor) and ord P >= that + d*ord(v)

    Q(u/v) factors as (u/v - y)(u/v + y), so its order is at least the
    approximation distance plus the order of the cofactor (which is >= 0).
    An infinite distance (an exact root) holds vacuously.
    """
    if distance == INFINITY:
        return True
    cofactor_ord = evaluation.cofactor.ord()
    q_ord = evaluation.q_value.ord()
    p_ord = evaluation.p_value.ord()
    required = distance + cofactor_ord
    holds = q_ord >= required and p_ord >= required + d * ord_v
    logger.debug("bridge: ord Q=%s ord P=%s distance=%s cofactor=%s -> %s",
                 q_ord, p_ord, distance, cofactor_ord, holds)
    return holds
