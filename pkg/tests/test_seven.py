from fractions import Fraction

import pytest

from adelicert.ellcurve import count_points_exhaustive
from adelicert.seven import (FrobQDatum, QCurve, cartan_discriminator, certify_half_borel, point_order,
                             rational_torsion_point, roots_mod, step1_witness, step2_witness, step3_polynomial,
                             step3_witness)

E = QCurve(1, -1, 1, -19353, 958713)


@pytest.fixture(scope="module")
def data():
    return {p: FrobQDatum.from_curve(E, p) for p in (61, 127, 971, 19993)}


def test_a_p_hasse_and_counts(data):
    for p, d in data.items():
        assert d.a_p**2 <= 4 * p
    # oracle at the smallest witness
    assert 61 + 1 - count_points_exhaustive(E.reduce(61)) == data[61].a_p


def test_rational_seven_torsion():
    P = rational_torsion_point(E, 7)
    assert P == (Fraction(103), Fraction(172))
    assert point_order(E, P) == 7


def test_step1_at_61(data):
    assert step1_witness(data[61], 7)
    assert not step2_witness(data[61], 7)


def test_step2_at_971(data):
    assert step2_witness(data[971], 7)
    assert not step1_witness(data[971], 7)


def test_cartan_ruled_out_at_127(data):
    assert (1 + 127 - data[127].a_p) % 49 != 0
    assert cartan_discriminator(data[127], 7) is False


def test_step3_at_19993(data):
    d = data[19993]
    assert cartan_discriminator(d, 7)
    s, n = step3_polynomial(d, 7)
    assert roots_mod(s, n, 7) == []
    assert step3_witness(d, 7, E)


def test_roots_mod_49_enumeration():
    # T^2 - 13 T + 61 against a brute search over pairs
    pairs = [(x, y) for x in range(49) for y in range(49) if (x + y) % 49 == 13 and (x * y) % 49 == 61 % 49]
    assert sorted({x for x, _ in pairs}) == roots_mod(13, 61, 49)


def test_double_root_gives_no_step1():
    # T^2 - 2T + 1 mod 7 has a double root
    assert not step1_witness(FrobQDatum(29, 2), 7)


def test_step_exclusive_over_range():
    for p in (3, 5, 11, 13, 17, 19, 23, 29, 31, 37):
        d = FrobQDatum.from_curve(E, p)
        assert not (step1_witness(d, 7) and step2_witness(d, 7))


def test_cartan_precondition():
    with pytest.raises(ValueError):
        cartan_discriminator(FrobQDatum(61, 13), 7)


def test_step3_precondition():
    with pytest.raises(ValueError):
        step3_polynomial(FrobQDatum(127, 2), 7)


def test_certify_with_hints():
    cert = certify_half_borel(E, 7, 20000, {"step1": [61], "step2": [971], "cartan": [127], "step3": [19993]})
    assert cert.verdict == "certified"
    assert [cert.get(c).witnesses[0]["p"] for c in ("step1", "step2", "cartan_ruled_out", "step3")] == [61, 971, 127, 19993]


def test_certify_small_bound_undetermined():
    cert = certify_half_borel(E, 7, 40)
    assert cert.verdict == "undetermined"
    assert cert.get("step3").status == "undetermined"
