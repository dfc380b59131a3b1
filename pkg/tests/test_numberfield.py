from fractions import Fraction

import pytest

from adelicert.numberfield import NumberField, galois_group_is_S3, norm_and_trace, totally_positive


def test_generator_satisfies_polynomial(K31):
    a = K31.gen
    assert a**3 + a + 1 == K31.zero


def test_norm_and_trace_of_shift(K31):
    # N(a - 3) = -f(3) for monic f
    assert norm_and_trace(K31.gen - 3) == (Fraction(-31), Fraction(-9))


def test_inverse_round_trip(K31):
    x = K31.element([2, -1, 5])
    assert x * (1 / x) == K31.one


def test_discriminant_and_signature(K31):
    assert K31.disc_K == -31
    assert K31.signature == (1, 1)
    assert K31.index_is_trivial


def test_s3_detection(K31):
    assert galois_group_is_S3(K31)
    # x^3 - 3x + 1 is cyclic
    assert not galois_group_is_S3(NumberField((1, -3, 0)))


def test_reducible_polynomial_rejected():
    with pytest.raises(ValueError):
        NumberField((0, -1, 0))


def test_totally_positive(K31):
    # -a is the real root's negative, a unit of norm 1
    assert totally_positive(K31.element([0, -1, 0]))
    assert not totally_positive(K31.gen)


def test_nonmonogenic_basis(cfg15):
    K = cfg15.field
    assert K.disc_K == -503
    b = K.gen
    half = K.from_basis([0, 0, 1])
    assert half == (b + b * b) / 2
    assert half.is_integral()
