import random
from fractions import Fraction as F

from fourbody.diffop import DiffOperator, commutator
from fourbody.geometry import MassConfig
from fourbody.oscillator import build_delta_rad
from fourbody.report import FAIL, PASS, REPORTED
from fourbody.suites import rand_masses
from fourbody.symmetries import (_all_second_order, build_first_order, build_second_order, decomposition_residual,
                                 normalizers_squared, printed_second_order, proportionality, so3_constants,
                                 verify_symmetry_suite)


def statuses(checks):
    return {c.check_id: c.status for c in checks}


def test_suite_equal_masses():
    st = statuses(verify_symmetry_suite(MassConfig.equal(1), 3))
    assert FAIL not in st.values()
    assert st["symmetry.S1-S4-transcription"] == REPORTED


def test_suite_random_masses_generic_d():
    st = statuses(verify_symmetry_suite(MassConfig.of(1, 2, 3, 4), F(7, 2)))
    assert all(v in (PASS, REPORTED) for v in st.values())


def test_first_order_commute_with_laplacian():
    mc = MassConfig.of(1, 2, 3, 4)
    lap = build_delta_rad(mc, 3)
    for i in (1, 2, 3):
        assert commutator(lap, build_first_order(mc, i).op).is_zero()


def test_so3_constants():
    mc = MassConfig.of(1, 2, 3, 4)
    J = {i: build_first_order(mc, i).op for i in (1, 2, 3)}
    c = so3_constants(mc)
    m1, m2, m3, m4 = 1, 2, 3, 4
    assert c["[J1,J2]"] == m2 * (m3 + m4) * 10
    assert proportionality(commutator(J[1], J[2]), J[3]) == c["[J1,J2]"]
    assert proportionality(commutator(J[3], J[1]), J[2]) == m1
    assert proportionality(commutator(J[2], J[3]), J[1]) == m3 * m4 * (m1 + m3 + m4)
    a1, a2, a3 = normalizers_squared(mc)
    assert c["[J1,J2]"] ** 2 == a1 * a2 / a3


def test_second_order_decomposition_random_masses():
    rnd = random.Random(17)
    s = _all_second_order(F(7, 2))
    for _ in range(10):
        assert decomposition_residual(rand_masses(rnd), F(7, 2), s).is_zero()


def test_second_order_commute_pairwise():
    s = [build_second_order(5, i).op for i in range(1, 7)]
    for a in range(6):
        for b in range(a + 1, 6):
            assert commutator(s[a], s[b]).is_zero()


def test_j3_s1_relation():
    mc = MassConfig.of(2, 1, 3, 5)
    s = [build_second_order(3, i).op for i in range(1, 7)]
    j3 = build_first_order(mc, 3).op
    assert proportionality(commutator(j3, s[0]), s[4].scale(3) - s[5].scale(5)) == -2 * 2


def test_printed_s1_s4_fail_decomposition():
    mc = MassConfig.of(1, 2, 3, 4)
    printed = [printed_second_order(mc, 3, p) for p in range(1, 5)]
    rest = _all_second_order(F(3))[4:]
    assert not decomposition_residual(mc, 3, printed + rest).is_zero()


def test_negative_control_sign_flip():
    s = list(_all_second_order(F(3)))
    op = s[0]
    (alpha, coeff), *_ = list(op.items())
    s[0] = op - DiffOperator({alpha: coeff}).scale(2)
    checks = verify_symmetry_suite(MassConfig.equal(1), 3, second_order=s, tag="-corrupt")
    st = statuses(checks)
    assert st["symmetry-corrupt.decomposition"] == FAIL
    bad = next(c for c in checks if c.check_id == "symmetry-corrupt.decomposition")
    assert not bad.details["residual"].is_zero()
