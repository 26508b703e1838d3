"""
Tests for the counterexample construction
"""

import random
from fractions import Fraction

import pytest

from artinlab.construction import (Regime, build_triple, build_xpk, check_parameters,
                                   coefficient_regime, default_precision, distance_to_root,
                                   factorization_residual, root_xp, sqrt_newton, sweep_triples,
                                   u_series, v_series, x_pk_series, z_series)
from artinlab.error import BadParameters, NotASquareLeadingForm, PrecisionTooLow
from artinlab.fields import FieldDescriptor, binomial_half
from artinlab.series import GradedSeries, monomials_below


Q = FieldDescriptor.rationals()
F3 = FieldDescriptor.prime(3)
F5 = FieldDescriptor.prime(5)
F7 = FieldDescriptor.prime(7)


def test_explicit_series():
    """Test z_p, v_k and u_{p,k}"""
    assert z_series(3).render() == "T1^2 + T2^3"
    assert v_series(4) == GradedSeries.monomial(Q, (5, 0))
    assert u_series(3, 3) == GradedSeries(Q, 2, {(4, 0): 1, (2, 3): Fraction(1, 2),
                                                 (0, 6): Fraction(-1, 8)})
    assert u_series(4, 3, F3) == GradedSeries(F3, 2, {(4, 0): 1, (2, 4): 2, (0, 8): 1})
    assert x_pk_series(3, 3).mul(v_series(3)) == u_series(3, 3)
    assert build_xpk(3, 3).ord() == 1


def test_parameter_checks():
    """p and k must exceed 2"""
    with pytest.raises(BadParameters):
        check_parameters(2, 3)
    with pytest.raises(BadParameters):
        build_triple(3, 2)
    assert default_precision(3, 3) == 13
    assert default_precision(3, 3, guard=0) == 11


def test_triple_p3_k3():
    """ord P = 11 and min ord = 3 for (u_{3,3}, v_3, z_3)"""
    triple = build_triple(3, 3)
    assert triple.predicted_ordP == 11
    assert triple.measured_ordP == 11
    assert triple.ord_u == 4
    assert triple.ord_v == 3
    assert triple.min_uv_ord == 3
    assert triple.regime is Regime.EQ
    assert triple.holds()


def test_triple_grid():
    """ord P = (p+2)k - 4 across a grid over Q"""
    for p in range(3, 9):
        for k in range(3, 9):
            triple = build_triple(p, k)
            assert triple.measured_ordP == (p + 2) * k - 4
            assert triple.min_uv_ord == 2 * k - 3
            assert triple.holds()


def test_special_diagonal():
    """k = p + 2 gives ord P = k^2 - 4"""
    for k in range(5, 8):
        triple = build_triple(k - 2, k)
        assert triple.measured_ordP == k * k - 4


def test_precision_too_low():
    """Test precision below the asserted order"""
    with pytest.raises(PrecisionTooLow):
        build_triple(3, 3, precision=11)
    with pytest.raises(PrecisionTooLow):
        distance_to_root(3, 3, precision=4)


def test_regimes_over_finite_fields():
    """Equality holds exactly when a_k survives reduction"""
    assert coefficient_regime(3, 4, Q) is Regime.EQ
    assert coefficient_regime(3, 4, F5) is Regime.GEQ
    assert coefficient_regime(3, 6, F3) is Regime.GEQ
    assert coefficient_regime(3, 5, F3) is Regime.EQ

    triple = build_triple(3, 4, F5)
    assert triple.regime is Regime.GEQ
    assert triple.measured_ordP is None or triple.measured_ordP >= triple.predicted_ordP
    assert triple.holds()

    triple = build_triple(3, 5, F3)
    assert triple.measured_ordP == 21


def test_sqrt_newton():
    """Square roots of perfect squares are recovered exactly"""
    for field in (Q, F5, F7):
        root = GradedSeries(field, 2, {(0, 0): 1, (1, 0): 1, (0, 1): 2})
        witness = sqrt_newton(root.mul(root), 6)
        assert witness.holds()
        assert witness.root == root.truncate(6)


def random_unit_tail(rng, field, degree=5, density=0.4):
    """1 + h with h a random polynomial without constant term"""
    terms = {(0, 0): 1}
    for mono in monomials_below(2, degree)[1:]:
        if rng.random() < density:
            if field.is_prime:
                terms[mono] = rng.randrange(field.characteristic)
            else:
                terms[mono] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return GradedSeries(field, 2, terms)


def test_sqrt_newton_round_trip():
    """sqrt_newton(g^2) recovers g = c*m*(1 + h) up to sign"""
    rng = random.Random(31)
    for trial in range(300):
        field = [Q, F5, F7][trial % 3]
        a, b = rng.randint(0, 2), rng.randint(0, 2)
        c = rng.randint(1, field.characteristic - 1) if field.is_prime else rng.randint(1, 6)
        g = random_unit_tail(rng, field).shift((a, b)).scale(field.reduce(c))
        precision = 2 * (a + b) + rng.randint(2, 7)
        witness = sqrt_newton(g.mul(g), precision)
        assert witness.holds()
        root = witness.root
        assert root.precision == precision - (a + b)
        negated = g.scale(field.reduce(-1))
        assert root in (g.truncate(root.precision), negated.truncate(root.precision))


def test_root_xp_coefficients():
    """x_p = sum a_n T1^(1-2n) T2^(np) with a_n the half-binomial coefficients"""
    for field in (Q, F3, F5):
        root = root_xp(3, 16, field)
        for n in range(13):
            assert root.coefficient((1 - 2 * n, 3 * n)).value == binomial_half(n, field).value
        assert len(root) == sum(1 for n in range(15) if binomial_half(n, field))


def test_sqrt_newton_rejects_non_squares():
    """Leading forms must be square monomials with a square coefficient"""
    with pytest.raises(NotASquareLeadingForm):
        sqrt_newton(GradedSeries(Q, 2, {(1, 1): 1, (0, 3): 1}), 5)
    with pytest.raises(NotASquareLeadingForm):
        sqrt_newton(GradedSeries(Q, 2, {(2, 0): 2}), 5)
    with pytest.raises(NotASquareLeadingForm):
        sqrt_newton(GradedSeries(F7, 2, {(2, 0): 3}), 5)
    assert sqrt_newton(GradedSeries(F7, 2, {(2, 0): 2}), 5).holds()


def test_root_xp():
    """x_p^2 = z_p modulo the working precision"""
    for field in (Q, F3):
        witness = sqrt_newton(z_series(3, field), 11)
        assert witness.holds()
        root = root_xp(3, 10, field)
        assert root.lowest_form() == GradedSeries.monomial(field, (1, 0))
        assert root.coefficient((-1, 3)).value == field.from_fraction(Fraction(1, 2))


def test_distance_to_root():
    """ord(x_p - x_{p,k}) = (p-2)k + 1"""
    assert distance_to_root(4, 3) == 7
    assert distance_to_root(3, 4) == 5
    assert distance_to_root(6, 3) == 13
    for p in range(3, 6):
        for k in range(3, 6):
            assert distance_to_root(p, k) == (p - 2) * k + 1


def test_factorization_residual():
    """u^2 - z v^2 = (x_pk - x_p)(x_pk + x_p) v^2"""
    for p, k in [(3, 3), (4, 3), (3, 5)]:
        triple = build_triple(p, k)
        assert factorization_residual(triple).is_zero_mod(triple.precision)


def test_sweep_is_order_independent():
    """Parallel sweeps return the same triples in the same order"""
    serial = sweep_triples([3, 4], [3, 4], Q, jobs=1)
    parallel = sweep_triples([3, 4], [3, 4], Q, jobs=2)
    assert [(t.p, t.k, t.measured_ordP) for t in serial] == \
        [(t.p, t.k, t.measured_ordP) for t in parallel]
    assert [(t.p, t.k) for t in serial] == [(3, 3), (3, 4), (4, 3), (4, 4)]


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
