import math
import random
from fractions import Fraction as F

import pytest

from fourbody.diffop import apply, commutator, matrix_on_basis
from fourbody.geometry import MassConfig
from fourbody.oscillator import GaugeParams, build_h_es
from fourbody.poly import Polynomial, graded_basis
from fourbody.sl7 import (GeneratorId, affine_closure_check, all_generators, flag_action_check, h_es_from_generators,
                          lie_form_discrepancy, realize, verify_algebra_relations)
from fourbody.suites import rand_gauge, rand_masses

u1 = Polynomial.var(0)


def mono(exp):
    return Polynomial.monomial(exp)


def test_realization_examples():
    for k in range(5):
        assert apply(realize(GeneratorId.cartan(1, 1)), u1 ** k) == (u1 ** k).scale(k)
    assert apply(realize(GeneratorId.raiser(1), 2), u1 ** 2).is_zero()
    assert apply(realize(GeneratorId.raiser(1), 2), u1) == -(u1 ** 2)
    for e in graded_basis(3):
        assert apply(realize(GeneratorId.euler(), 0), mono(e)) == mono(e).scale(sum(e))


def test_generator_count():
    assert len(all_generators()) == 6 + 36 + 1 + 6


def test_named_relations():
    j = lambda g, N=0: realize(g, N)
    c = GeneratorId.cartan
    assert commutator(j(c(1, 2)), j(c(2, 1))) == j(c(1, 1)) - j(c(2, 2))
    for N in (0, 2, F(5, 2)):
        assert commutator(j(GeneratorId.lower(1)), j(GeneratorId.raiser(1), N)) == \
            j(GeneratorId.euler(), N) + j(c(1, 1))
    assert commutator(j(GeneratorId.lower(1)), j(GeneratorId.lower(2))).is_zero()


@pytest.mark.parametrize("N", [0, 2, F(7, 3)])
def test_all_relations(N):
    rels = verify_algebra_relations(N)
    assert rels and all(r.ok for r in rels)


def test_affine_closure():
    assert affine_closure_check()


@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_flag_action(N):
    flags = flag_action_check(N)
    assert all(flags.values())
    mat = matrix_on_basis(realize(GeneratorId.raiser(2), N), N)
    assert mat.size == math.comb(N + 6, 6)


def test_equivalence_unit_masses():
    mc, gp = MassConfig.equal(1), GaugeParams.uniform(1)
    assert h_es_from_generators(mc, gp, 3) == build_h_es(mc, gp, 3)


def test_equivalence_random_draws():
    rnd = random.Random(77)
    for _ in range(10):
        mc, gp = rand_masses(rnd), rand_gauge(rnd)
        d = F(rnd.randint(4, 14), 2)
        assert h_es_from_generators(mc, gp, d) == build_h_es(mc, gp, d)


@pytest.mark.parametrize("variant", ["equal", "equal-uniform", "atomic", "molecular", "three-center"])
def test_special_lie_forms(variant):
    gp = GaugeParams.from_values([2, 1, 3, 1, 2, 1], 1)
    if variant == "equal-uniform":
        gp = GaugeParams.uniform(2)
    if variant == "molecular":
        gp = gp.replace(a=0)
    if variant == "three-center":
        gp = gp.replace(a=0, b=0, e=0)
    assert lie_form_discrepancy(variant, gp, 3, F(3, 2)).is_zero()


def test_literal_lie_forms_differ():
    assert not lie_form_discrepancy("equal-uniform", GaugeParams.uniform(1), 3, 1, literal=True).is_zero()
    gp = GaugeParams(0, 1, 2, 3, 1, 2)
    assert not lie_form_discrepancy("molecular", gp, 3, 1, literal=True).is_zero()
