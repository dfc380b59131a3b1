"""Randomised invariants; every check is exact."""
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from adelicert.ellcurve import (ReducedCurve, count_points, count_points_exhaustive, full_four_torsion,
                                full_four_torsion_exhaustive)
from adelicert.finitefield import FiniteField, trace_extend
from adelicert.ideals import split_prime, valuation
from adelicert.intutil import factorint
from adelicert.numberfield import NumberField
from adelicert.squares import SQUARE, is_square_in_K

K = NumberField((1, 1, 0))
PRIME_POWERS = [q for q in range(2, 200) if len(factorint(q)) == 1]


def field_of_order(q: int) -> FiniteField:
    (p, k), = factorint(q).items()
    if k == 1:
        return FiniteField(p)
    for tail in itertools.product(range(p), repeat=k):
        if tail[0] == 0:
            continue
        try:
            return FiniteField(p, tail + (1,))
        except ValueError:
            continue
    raise AssertionError(f"no irreducible polynomial of degree {k} mod {p}")


def random_curve(F: FiniteField, rng: random.Random) -> ReducedCurve:
    while True:
        C = ReducedCurve(F, *(F.decode(rng.randrange(F.q)) for _ in range(5)))
        if not C.discriminant().is_zero():
            return C


def test_counts_match_enumeration_all_q_upto_199():
    rng = random.Random(2024)
    curves = 0
    for q in PRIME_POWERS:
        F = field_of_order(q)
        for _ in range(3):
            C = random_curve(F, rng)
            assert count_points(C) == count_points_exhaustive(C), (q, C)
            curves += 1
    assert curves >= 100


def test_four_torsion_halving_vs_enumeration():
    rng = random.Random(5)
    seen = {True: 0, False: 0}
    for q in (5, 9, 13, 17, 25, 29, 37, 41):
        F = field_of_order(q)
        for _ in range(6):
            r = [F.decode(rng.randrange(q)) for _ in range(3)]
            if len(set(x.encode() for x in r)) < 3:
                continue
            e1, e2, e3 = r
            C = ReducedCurve(F, F.zero, -(e1 + e2 + e3), F.zero, e1 * e2 + e1 * e3 + e2 * e3, -(e1 * e2 * e3))
            v = full_four_torsion(C)
            assert v == full_four_torsion_exhaustive(C)
            seen[v] += 1
    assert seen[True] and seen[False]


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", [2, 3])
def test_trace_extend_against_direct_count(p, n):
    rng = random.Random(p * 10 + n)
    Fp = FiniteField(p)
    Fq = field_of_order(p**n)
    for _ in range(3):
        C = random_curve(Fp, rng)
        t = p + 1 - count_points(C)
        Cn = ReducedCurve(Fq, *(Fq(int(a)) for a in C.ainvs))
        assert count_points_exhaustive(Cn) == p**n + 1 - trace_extend(t, p, n)


@given(st.integers(-20, 20), st.sampled_from([2, 3, 5, 7, 13]), st.integers(1, 4), st.integers(1, 4))
def test_trace_extend_tower(t, q, m, n):
    if t * t > 4 * q:
        return
    assert trace_extend(trace_extend(t, q, m), q**m, n) == trace_extend(t, q, m * n)


elements = st.lists(st.integers(-50, 50), min_size=3, max_size=3).map(K.element).filter(lambda x: not x.is_zero())


@given(elements, elements)
def test_norm_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


@settings(max_examples=60)
@given(elements, elements, st.sampled_from([2, 3, 7, 13, 31]))
def test_valuation_additive(x, y, p):
    for P in split_prime(K, p):
        assert valuation(x * y, P) == valuation(x, P) + valuation(y, P)


def test_is_square_round_trip_10k():
    rng = random.Random(11)
    done = 0
    while done < 10_000:
        x = K.element([rng.randint(-10**6, 10**6) for _ in range(3)])
        if x.is_zero():
            continue
        v = is_square_in_K(x * x)
        assert v.status == SQUARE and v.root * v.root == x * x
        done += 1
