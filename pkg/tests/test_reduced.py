import random
from fractions import Fraction as F

import pytest

from fourbody.diffop import DiffOperator, apply, matrix_on_basis
from fourbody.geometry import MassConfig
from fourbody.poly import Polynomial
from fourbody.reduced import (QesParams, SL2Generator, build_delta_P, build_delta_PS, effective_potential_coefficient,
                              es_laguerre, es_spectrum, gamma_gauge_residual, gauged_operator, ground_state_ratio,
                              h_qes, laguerre, potential_preserves_flag, ps_closure_verdict, qes_exact_pairs_N1,
                              qes_model, reduction_check, volume_vars)
from fourbody.suites import rand_masses

P1 = Polynomial.var(0, 1)


def test_volume_vars():
    vv = volume_vars(MassConfig.equal(1))
    assert vv.P == Polynomial.linear([F(1, 4)] * 6)
    assert vv.S.eval([1] * 6) == 12
    assert vv.P.eval([0] * 6) == 0 and vv.S.eval([0] * 6) == 0
    with pytest.raises(ValueError):
        volume_vars(MassConfig.of("inf", 1, 1, 1))


def test_delta_P_examples():
    for d in (3, F(7, 2)):
        dP = build_delta_P(d)
        assert apply(dP, P1) == Polynomial.const(3 * F(d), 1)
        assert apply(dP, P1 * P1) == P1.scale(4 + 6 * F(d))


def test_delta_PS_on_S():
    mc = MassConfig.of(1, 2, 3, 4)
    op = build_delta_PS(mc, 5)
    S = Polynomial.var(1, 2)
    assert apply(op, S) == Polynomial.var(0, 2).scale(8 * 10 * 4)


def test_effective_potential_coefficient():
    assert effective_potential_coefficient(1) == 0
    assert effective_potential_coefficient(3) == 3 * 2 * 8 / F(8)


def test_P_reduction_exact():
    rnd = random.Random(10)
    for _ in range(5):
        mc = rand_masses(rnd)
        res = reduction_check(mc, F(7, 2), 4)
        assert all(r.ok for r in res)
    res = reduction_check(MassConfig.of(1, 2, 3, 4), 3, 1)
    assert res[1].ok


def test_PS_closure_verdict():
    mc = MassConfig.of(1, 2, 3, 4)
    v = ps_closure_verdict(mc, 3)
    assert v.laplacian_S_matches
    assert v.cross_is_4S
    assert v.volume_coefficient == 3456 * mc.total * mc.product
    assert not v.ss_in_PS and not v.closes and not v.displayed_complete
    mixed = {r.exponents: r.ok for r in reduction_check(mc, 3, 2, mixed=True)}
    assert mixed[(0, 1)] and not mixed[(1, 1)] and not mixed[(0, 2)]


def test_sl2_generators():
    Jp = SL2Generator("Jplus", 3).operator()
    assert apply(Jp, P1 ** 3).is_zero()
    check = matrix_on_basis(Jp, 3)
    assert check.size == 4
    with pytest.raises(ValueError):
        SL2Generator("Jx")


def test_qes_gauge_form():
    q = QesParams(F(1, 3), 2, 2, 3)
    expected = gauged_operator(q) - DiffOperator.multiplication(P1.scale(4 * q.N * q.A), nvars=1)
    assert h_qes(q) == expected


def test_qes_n0():
    for A in (F(1, 5), F(3)):
        m = qes_model(QesParams(A, 0, 1, 3))
        assert m.matrix == ((0,),)
        assert m.energies[0] == 9


def test_qes_n1_exact():
    q = QesParams(F(1, 3), 1, 1, 3)
    mat = qes_model(q).matrix
    for pair in qes_exact_pairs_N1(q):
        assert all(r.is_zero() for r in pair.residual(mat))
    # the polynomial -3d + lambda P is annihilated by the gauged operator minus lambda
    lam = sorted(qes_model(q).eigenvalues)
    assert abs(lam[0] + lam[1] - 4) < 1e-12 and abs(lam[0] * lam[1] + 12 * 3 * F(1, 3)) < 1e-12


def test_qes_a0_equidistant():
    for N in (1, 3, 5):
        m = qes_model(QesParams(0, N, 2, 3))
        diag = [m.matrix[k][k] for k in range(N + 1)]
        assert diag == [4 * 2 * k for k in range(N + 1)]
        assert all(m.matrix[i][j] == 0 for i in range(N + 1) for j in range(N + 1) if i > j)


def test_qes_potential_flag():
    for N in (1, 2, 3):
        assert potential_preserves_flag(QesParams(F(2, 5), N, 1, 3))
        assert not potential_preserves_flag(QesParams(F(2, 5), N, 1, 3), literal=True)


def test_qes_matrix_never_violates_flag():
    for A in (0, F(1, 7), 5):
        for N in range(5):
            matrix_on_basis(h_qes(QesParams(A, N, 1, F(7, 2))), N)


def test_ground_state():
    q = QesParams(F(1, 3), 1, 2, 5)
    for P in (F(1, 3), F(5, 2), 4):
        assert ground_state_ratio(q, P) == 3 * 5 * 2
    for k in range(3):
        assert gamma_gauge_residual(F(7, 2), k, F(3, 2)) == 0


def test_laguerre_examples():
    assert es_laguerre(3, 1, 0).energy == 9
    lvl = es_laguerre(3, 1, 1)
    assert lvl.energy == 13 and lvl.ok
    assert lvl.polynomial == Polynomial.const(1 + F(7, 2), 1) - P1.scale(2)
    assert laguerre(2, 0) == Polynomial({(0,): 1, (1,): -2, (2,): F(1, 2)}, 1)


def test_es_spectrum_properties():
    for d in (1, 3, F(7, 2)):
        levels = es_spectrum(d, F(3, 2), 10)
        assert all(l.ok for l in levels)
        gaps = {b.energy - a.energy for a, b in zip(levels, levels[1:])}
        assert gaps == {4 * F(3, 2)}
    assert [l.energy for l in es_spectrum(3, 2, 4)] == [2 * l.energy for l in es_spectrum(3, 1, 4)]
