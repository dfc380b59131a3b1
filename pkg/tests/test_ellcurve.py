import pytest

from adelicert.ellcurve import (ADDITIVE_POT_GOOD, GOOD, MULTIPLICATIVE, CurveModel, ReducedCurve,
                                SingularCurveError, classify_reduction, count_points,
                                count_points_exhaustive, full_four_torsion, full_four_torsion_exhaustive,
                                invariants, reduce_at)
from adelicert.finitefield import FiniteField
from adelicert.ideals import prime_from_generator, split_prime


def test_disc_from_roots_matches_product(cfg13):
    E = cfg13.curve
    e1, e2, e3 = E.roots
    assert invariants(E).disc == 16 * ((e1 - e2) * (e1 - e3) * (e2 - e3)) ** 2


def test_change_coords_preserves_j(cfg13):
    E = cfg13.curve
    K = E.field
    E2 = E.change_coords(K(2), r=K.gen, s=1, t=K(3))
    assert invariants(E2).j == invariants(E).j


def test_singular_model_rejected(K31):
    with pytest.raises((SingularCurveError, ValueError)):
        CurveModel.from_roots(K31, K31.zero, K31.zero, K31.one)


def test_example13_bad_primes(cfg13):
    E, K = cfg13.curve, cfg13.field
    types = {(P.p, P.f, P.e): classify_reduction(E, P).type for p in (2, 3, 31) for P in split_prime(K, p)}
    assert types == {(2, 3, 1): GOOD, (3, 1, 1): MULTIPLICATIVE, (3, 2, 1): GOOD,
                     (31, 1, 1): MULTIPLICATIVE, (31, 1, 2): GOOD}


def test_example15_additive_prime(cfg15):
    E, K = cfg15.curve, cfg15.field
    types = sorted(classify_reduction(E, P).type for P in split_prime(K, 2))
    assert types == sorted([MULTIPLICATIVE, MULTIPLICATIVE, ADDITIVE_POT_GOOD])


def test_count_at_prime_over_13(cfg13):
    K = cfg13.field
    P = prime_from_generator(K, K.element([1, -2, 0]))
    assert P.norm == 13
    assert count_points(reduce_at(cfg13.curve, P)) == 16


@pytest.mark.parametrize("p,mod", [(5, (0, 1)), (7, (0, 1)), (3, (1, 2, 0, 1)), (2, (1, 1, 0, 1))])
def test_count_matches_enumeration(p, mod):
    F = FiniteField(p, mod)
    g = F.gen
    for k in range(1, 6):
        C = ReducedCurve(F, F.one, g, F.zero, g + 1, F(k) * g + 1)
        if not C.discriminant().is_zero():
            assert count_points(C) == count_points_exhaustive(C)
            return
    raise AssertionError("no smooth test curve")


def test_full_four_torsion_over_F157_cubed(cfg13):
    K = cfg13.field
    P = split_prime(K, 157)[0]
    assert P.norm == 3869893
    assert full_four_torsion(reduce_at(cfg13.curve, P))


def test_four_torsion_halving_vs_enumeration():
    F = FiniteField(29)
    # y^2 = x(x-1)(x+1) has full 2-torsion over F_29
    C = ReducedCurve(F, F.zero, F.zero, F.zero, F(-1), F.zero)
    assert full_four_torsion(C) == full_four_torsion_exhaustive(C)
