import dataclasses

import pytest

from adelicert.certify import (CERTIFIED, FAILED, FULL2TORS, GENERAL, PER_REFERENCE, UNDETERMINED, Certificate,
                               ClassData, Condition, CurveData, FrobeniusDatum, HypothesisError, _gcd_residual,
                               _role, certify_all_mod_l, certify_full_2tors, conductor_modulus, exit_code,
                               mod9_pattern, unit_bound)
from adelicert.ideals import prime_from_generator, split_prime


@pytest.fixture(scope="module")
def cert13(cfg13):
    return certify_full_2tors(cfg13.curve, cfg13.class_data, cfg13.search, cfg13.hints)


def test_class_data_rejects_non_positive_unit(K31):
    with pytest.raises(ValueError):
        ClassData(1, K31.gen)


def test_class_data_rejects_non_unit(K31):
    with pytest.raises(ValueError):
        ClassData(1, K31(2))


def test_frobenius_hasse_guard(K31):
    P = split_prime(K31, 13)[0]
    with pytest.raises(ArithmeticError):
        FrobeniusDatum(P, 13, 8)


def test_count_ext_matches_direct(cfg13):
    K = cfg13.field
    cd = CurveData(cfg13.curve)
    P = prime_from_generator(K, K.element([1, -2, 0]))
    fd = cd.frobenius(P)
    assert fd.count == 16
    assert fd.count_ext(1) == 16
    assert fd.count_ext(2) == 13**2 + 1 - (fd.t**2 - 2 * 13)


def test_gcd_residual_small():
    class FD:
        def __init__(self, p):
            self.prime = type("P", (), {"p": p})()
    g, res = _gcd_residual([(FD(13), 16), (FD(29), 24)])
    assert (g, res) == (8, {2})
    # every count away from 3 divisible by 3 puts 3 in the residual set
    g, res = _gcd_residual([(FD(3), 8), (FD(7), 9), (FD(11), 12)])
    assert (g, res) == (1, {3})


def test_mod9_pattern_trace_six(K31):
    P = split_prime(K31, 29)[0]
    assert mod9_pattern(FrobeniusDatum(P, 29, 6))
    assert not mod9_pattern(FrobeniusDatum(P, 29, 5))


def test_roles_at_31(cfg13):
    K = cfg13.field
    cd = CurveData(cfg13.curve)
    P = prime_from_generator(K, K.element([-2, 1, 0]))
    assert "s1" in _role(cd.frobenius(P), 31)


def test_verdict_and_exit_codes(cfg13):
    c = Certificate({}, kind="x")
    c.add(Condition("a", CERTIFIED))
    c.add(Condition("b", PER_REFERENCE))
    assert c.verdict == CERTIFIED and exit_code(c.verdict) == 0
    c.add(Condition("c", UNDETERMINED))
    assert c.verdict == UNDETERMINED and exit_code(c.verdict) == 1
    c.add(Condition("d", FAILED))
    assert c.verdict == FAILED and exit_code(c.verdict) == 2


def test_optional_condition_does_not_block():
    c = Certificate({})
    c.add(Condition("a", CERTIFIED))
    c.add(Condition("b", UNDETERMINED, required=False))
    assert c.verdict == CERTIFIED


def test_example13_certified(cert13):
    assert cert13.verdict == CERTIFIED
    ex = cert13.get("exclusion")
    assert ex.values["residual"] == [2, 31]


def test_example13_certificate_json_is_stringly(cert13):
    d = cert13.to_json(timestamp=False)
    assert set(d) == {"kind", "curve", "conditions", "verdict", "tool_version"}
    mod8 = cert13.get("mod8").witnesses[0]
    assert mod8["N"] == "3869893"


def test_example15_conductor(cfg15):
    cd = CurveData(cfg15.curve)
    mod = conductor_modulus(cd, FULL2TORS)
    assert [i for _, i in mod.finite_part] == [3]
    assert mod.r == 4


def test_example15_unit_bound_length_four(cfg15):
    cd = CurveData(cfg15.curve)
    mod = conductor_modulus(cd, FULL2TORS)
    ub = unit_bound(cfg15.class_data, mod.finite_part)
    assert ub.length == 4
    assert ub.primes == [2, 5, 17, 73, 31741, 1225603]


def test_example15_with_d2_contains_large_prime(cfg15):
    cd = CurveData(cfg15.curve)
    mod = conductor_modulus(cd, FULL2TORS)
    ub = unit_bound(dataclasses.replace(cfg15.class_data, d=2, trivial_narrow_class=False), mod.finite_part)
    assert 37012153 in ub.primes


def test_example16_unit_bound(cfg16):
    cd = CurveData(cfg16.curve)
    mod = conductor_modulus(cd, GENERAL)
    assert mod.finite_part == []
    ub = unit_bound(cfg16.class_data, mod.finite_part)
    assert ub.factor_norms == [11, 77]
    assert ub.primes == [7, 11]


def test_example16_certified(cfg16):
    cert = certify_all_mod_l(cfg16.curve, cfg16.class_data, cfg16.search, cfg16.hints)
    assert cert.verdict == CERTIFIED
    assert cert.get("exclusion").values["residual"] == [7, 11, 1823]
    for ell in (7, 11, 1823):
        assert cert.get(f"prop19_l{ell}").status == CERTIFIED


def test_full2tors_requires_roots(cfg16):
    with pytest.raises(HypothesisError):
        certify_full_2tors(cfg16.curve, cfg16.class_data)
