import math
import random
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from fourbody.geometry import v4_squared_poly
from fourbody.poly import (NVARS, Polynomial, VarId, graded_basis, partial_derivative, poly_eval, rho)

rat = st.fractions(min_value=-5, max_value=5, max_denominator=6)
exps = st.tuples(*[st.integers(0, 2)] * NVARS)
polys = st.dictionaries(exps, rat, max_size=5).map(Polynomial)
points = st.lists(rat, min_size=NVARS, max_size=NVARS)


def test_var_order():
    assert [v.pair for v in VarId] == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def test_eval_examples():
    assert poly_eval(rho(1, 2) + rho(3, 4), [1, 0, 0, 0, 0, 2]) == 3
    assert poly_eval(Polynomial.zero(), [5, 4, 3, 2, 1, 0]) == 0
    assert poly_eval(v4_squared_poly(), [1] * 6) == F(1, 72)


def test_ring_examples():
    r12 = rho(1, 2)
    assert r12 * r12 == Polynomial.monomial((2, 0, 0, 0, 0, 0))
    f = r12 * 3 + rho(2, 4) ** 2 - F(1, 2)
    assert (f + (-f)).is_zero()
    assert (f - f).terms == {}


def test_zero_coefficients_are_dropped():
    p = Polynomial({(1, 0, 0, 0, 0, 0): 0, (0, 1, 0, 0, 0, 0): F(2, 4)})
    assert p.terms == {(0, 1, 0, 0, 0, 0): F(1, 2)}


@settings(max_examples=50, deadline=None)
@given(polys, polys, points)
def test_eval_is_a_ring_homomorphism(f, g, x):
    assert (f * g).eval(x) == f.eval(x) * g.eval(x)
    assert (f + g).eval(x) == f.eval(x) + g.eval(x)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f


@settings(max_examples=30, deadline=None)
@given(polys, polys)
def test_degree_is_additive(f, g):
    if not f.is_zero() and not g.is_zero():
        assert (f * g).degree == f.degree + g.degree


def test_partial_derivative_examples():
    r12, r13, r34 = rho(1, 2), rho(1, 3), rho(3, 4)
    assert partial_derivative(r12 ** 2, VarId.R12) == r12 * 2
    assert partial_derivative(r12, VarId.R13).is_zero()
    assert partial_derivative(r12 ** 3 * r34, VarId.R12, 2) == r12 * r34 * 6
    assert partial_derivative(r13, VarId.R13, 0) == r13


def test_derivative_against_exact_differences():
    # for a polynomial of degree n in one variable, the n-th forward difference
    # of the derivative interpolant is exact; use Lagrange on n+1 nodes
    rnd = random.Random(3)
    p = Polynomial({tuple(rnd.randint(0, 2) for _ in range(6)): F(rnd.randint(-4, 4), rnd.randint(1, 3))
                    for _ in range(6)})
    x = [F(rnd.randint(1, 5), rnd.randint(1, 3)) for _ in range(6)]
    for v in range(6):
        n = p.degree
        nodes = [x[v] + k for k in range(n + 1)]
        vals = [p.eval(x[:v] + [t] + x[v + 1:]) for t in nodes]
        # derivative of the Lagrange interpolant at x[v] (node 0)
        deriv = F(0)
        for j in range(n + 1):
            lj = F(0)
            for k in range(n + 1):
                if k == j:
                    continue
                term = F(1, nodes[j] - nodes[k])
                for l in range(n + 1):
                    if l not in (j, k):
                        term *= (nodes[0] - nodes[l]) / (nodes[j] - nodes[l])
                lj += term
            deriv += vals[j] * lj
        assert p.diff(v).eval(x) == deriv


def test_graded_basis_sizes_and_order():
    assert graded_basis(0) == [(0,) * 6]
    assert len(graded_basis(1)) == 7
    assert len(graded_basis(3)) == 84
    for N in range(5):
        b = graded_basis(N)
        assert len(b) == math.comb(N + 6, 6)
        assert len(set(b)) == len(b)
        degs = [sum(e) for e in b]
        assert degs == sorted(degs)
        assert b == graded_basis(N)
