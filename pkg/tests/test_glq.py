import time

import pytest

from adelicert.glq import (MatMod, closure, commutator, level_group, squares_of_v1_mod8, square_identity_holds,
                           u2_mod8, verify_all)


def test_verify_all_under_a_second():
    t = time.perf_counter()
    res = verify_all()
    assert time.perf_counter() - t < 1.0
    assert res == {"squares_of_v1_mod8": True, "commutator_identities": True,
                   "commutator_lemma_mod8": True, "det5_extension": True}


def test_five_squares():
    assert len(squares_of_v1_mod8()) == 5


def test_square_identity():
    assert square_identity_holds()


def test_level_group_orders():
    assert len(level_group(1, 3)) == 2**8
    assert len(level_group(2, 3)) == 2**4
    assert len(u2_mod8()) == 8


def test_commutator_of_commuting_is_identity():
    x = MatMod.of(((3, 0), (0, 5)), 8)
    y = MatMod.of(((5, 0), (0, 3)), 8)
    assert commutator(x, y) == MatMod.of(((1, 0), (0, 1)), 8)


@pytest.mark.xfail(strict=True, reason="the three printed generators span a subgroup of order 4, not U2/U3")
def test_printed_generators_span_u2_mod_u3():
    gens = [MatMod.of(((1, 0), (4, 1)), 8), MatMod.of(((1, 4), (4, 1)), 8), MatMod.of(((1, 4), (0, 1)), 8)]
    assert closure(gens) == u2_mod8()
