from adelicert.fourtorsion import (cyclotomic_intersection_ok, halving_discriminants, mod4_degree_is_16,
                                   product_sets, sqrt_disc_in_cyclotomic, subset_products)


def test_subset_products_count():
    assert len(subset_products([2, 3, 5, 7])) == 15


def test_d_product_relation(cfg13):
    # d1 d2 d3 = -(d4 / 4)^2
    hd = halving_discriminants(*cfg13.curve.roots)
    assert hd.d1 * hd.d2 * hd.d3 * 16 == -(hd.d4 * hd.d4)


def test_example13_pairs(cfg13):
    ps = product_sets(cfg13.curve)
    assert len(ps.P_S) * len(ps.P_T) == 465


def test_example13_mod4_and_intersection(cfg13):
    assert mod4_degree_is_16(cfg13.curve).value is True
    res = cyclotomic_intersection_ok(cfg13.curve)
    assert res.value is True
    assert len(res.evidence) == 465
    assert all(e["status"] == "NonSquare" for e in res.evidence)


def test_fast_path_agrees(cfg13):
    assert cyclotomic_intersection_ok(cfg13.curve, fast_path=True).value is True


def test_sqrt_disc_not_cyclotomic(cfg16):
    assert sqrt_disc_in_cyclotomic(cfg16.curve).value is False


def test_sqrt_disc_requires_nonsquare_disc(cfg13):
    import pytest
    with pytest.raises(ValueError):
        sqrt_disc_in_cyclotomic(cfg13.curve)
