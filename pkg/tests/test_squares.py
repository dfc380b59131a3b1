import pytest

from adelicert.squares import NON_SQUARE, SQUARE, exact_sqrt, is_square_in_K, replay_nonsquare


def test_square_detected_with_root(K31):
    x = K31.element([3, -2, 7])
    v = is_square_in_K(x * x)
    assert v.status == SQUARE
    assert v.root * v.root == x * x


def test_nonsquare_has_replayable_witness(K31):
    x = K31.gen
    v = is_square_in_K(x)
    assert v.status == NON_SQUARE
    assert replay_nonsquare(x, v.witness)


def test_rational_nonsquare(K31):
    assert is_square_in_K(K31(-1)).status == NON_SQUARE
    assert is_square_in_K(K31(2)).status == NON_SQUARE


def test_fraction_input(K31):
    x, y = K31.element([1, 1, 0]), K31.element([5, 0, 2])
    v = is_square_in_K((x * x * 4, y * y))
    assert v.status == SQUARE


def test_exact_sqrt(K31):
    # a + 2 has norm 9 and is a square
    r = exact_sqrt(K31.element([2, 1, 0]))
    assert r is not None and r * r == K31.element([2, 1, 0])
    assert exact_sqrt(K31.gen) is None


def test_zero_rejected(K31):
    with pytest.raises(ValueError):
        is_square_in_K(K31.zero)
