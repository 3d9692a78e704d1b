import random
from fractions import Fraction as F

import pytest

from fourbody.errors import SingularPoint
from fourbody.exact import det
from fourbody.geometry import (MassConfig, cayley_menger_v4_squared, cometric, cometric_det_poly,
                               det_identity_check, domain_check, gauge_factor_and_veff, heron_s2, molecular_g2,
                               radial_measure, special_determinant_direct, special_determinants, v4_squared)
from fourbody.suites import rand_interior_point, rand_masses

SQUARE = [1, 2, 1, 1, 2, 1]


def test_heron():
    assert heron_s2(1, 1, 1) == F(3, 16)
    assert heron_s2(9, 16, 25) == 36
    assert heron_s2(1, 1, 4) == 0


def test_volume_examples():
    assert v4_squared([1] * 6) == F(1, 72)
    assert v4_squared(SQUARE) == 0
    assert v4_squared([4] * 6) == F(8, 9)


def test_volume_matches_cayley_menger():
    rnd = random.Random(12)
    for _ in range(50):
        x = [F(rnd.randint(0, 40), rnd.randint(1, 3)) for _ in range(6)]
        assert v4_squared(x) == cayley_menger_v4_squared(x)


def test_volume_is_cubic_homogeneous():
    x = rand_interior_point(random.Random(3))
    lam = F(5, 3)
    assert v4_squared([lam * v for v in x]) == lam ** 3 * v4_squared(x)


def test_domain():
    assert domain_check([1] * 6) == "interior"
    assert domain_check(SQUARE) == "boundary"
    assert domain_check([100, 1, 1, 1, 1, 1]) == "exterior"
    assert domain_check([-1, 1, 1, 1, 1, 1]) == "exterior"


def test_cometric_entries():
    g = cometric(MassConfig.equal(1), [1] * 6)
    assert g[0][0] == 4
    rnd = random.Random(1)
    for _ in range(5):
        mc = rand_masses(rnd)
        x = rand_interior_point(rnd)
        g = cometric(mc, x)
        assert g[0][5] == 0 and g[5][0] == 0
        assert all(g[i][j] == g[j][i] for i in range(6) for j in range(6))


def test_det_identity():
    mc = MassConfig.equal(1)
    chk = det_identity_check(mc, [1] * 6)
    assert chk.equal and chk.lhs == det(cometric(mc, [1] * 6))
    chk = det_identity_check(MassConfig.of(1, 2, 3, 4), SQUARE)
    assert chk.lhs == 0 and chk.rhs == 0
    rnd = random.Random(99)
    for _ in range(20):
        assert det_identity_check(rand_masses(rnd), rand_interior_point(rnd)).equal


def test_cometric_is_positive_definite_inside():
    rnd = random.Random(5)
    mc = rand_masses(rnd)
    for _ in range(10):
        assert cometric_det_poly(mc).eval(rand_interior_point(rnd)) > 0


def test_veff_equal_masses_unit_point():
    cmp = gauge_factor_and_veff(MassConfig.equal(1), 3, [1] * 6)
    assert cmp.transcribed == cmp.oracle
    assert "plain" in cmp.matching()
    assert all(r == 0 for r in cmp.drift_residual)


def test_veff_random_points_and_masses():
    rnd = random.Random(21)
    for d in (F(3), F(5), F(7, 2)):
        mc = rand_masses(rnd)
        x = rand_interior_point(rnd)
        cmp = gauge_factor_and_veff(mc, d, x)
        assert cmp.transcribed == cmp.oracle


def test_veff_literal_volume_exponent_is_inconsistent():
    cmp = gauge_factor_and_veff(MassConfig.of(1, 2, 3, 4), 3, rand_interior_point(random.Random(2)))
    assert cmp.matching(literal=True) == []
    assert any(r != 0 for r in cmp.drift_residual_literal)


def test_veff_homogeneity():
    mc = MassConfig.of(2, 1, 3, 1)
    x = rand_interior_point(random.Random(8))
    lam = F(3)
    a = gauge_factor_and_veff(mc, 5, x)
    b = gauge_factor_and_veff(mc, 5, [lam * v for v in x])
    assert b.oracle == a.oracle / lam
    assert b.transcribed == a.transcribed / lam


def test_radial_measure():
    x = rand_interior_point(random.Random(4))
    assert radial_measure(4, x) == 1
    assert radial_measure(6, [1] * 6) == F(1, 72)
    assert radial_measure(3, [1] * 6) == (F(1, 72), F(-1, 2))
    with pytest.raises(SingularPoint):
        radial_measure(3, SQUARE)


def test_special_determinants():
    assert special_determinants("three-center", [1] * 6) == 4
    assert special_determinant_direct("three-center", [1] * 6) == 4
    x = [3, 2, 5, 2, 5, 4]
    assert molecular_g2(x) == 2 * 3 * (2 + 5 + 2 + 5 - 3)
    assert special_determinants("atomic", SQUARE) == 0
    rnd = random.Random(6)
    for variant in ("atomic", "molecular", "three-center"):
        for _ in range(4):
            p = rand_interior_point(rnd)
            m = F(rnd.randint(1, 5), rnd.randint(1, 2))
            assert special_determinants(variant, p, m) == special_determinant_direct(variant, p, m)
