"""Linear differential operators with polynomial coefficients.

An operator is a finite sum ``sum_alpha c_alpha(x) d^alpha`` stored as a map
from the derivative multi-order ``alpha`` to the coefficient polynomial.
Composition is carried out symbolically with the Leibniz rule so that
identities between operators reduce to structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import FlagViolation, SingularPoint
from .poly import NVARS, Polynomial, Scalar, as_fraction, graded_basis


def _sub_orders(alpha: tuple[int, ...]):
    """All gamma <= alpha componentwise, with the multinomial weight C(alpha, gamma)."""
    for gamma in product(*(range(k + 1) for k in alpha)):
        w = 1
        for a, g in zip(alpha, gamma):
            w *= comb(a, g)
        yield gamma, w


class DiffOperator:
    __slots__ = ("_terms", "nvars")

    def __init__(self, terms: Mapping[tuple[int, ...], Polynomial] | None = None, nvars: int = NVARS):
        clean: dict[tuple[int, ...], Polynomial] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != nvars:
                raise ValueError("derivative order has wrong length")
            if not isinstance(c, Polynomial):
                c = Polynomial.const(c, nvars)
            if c.nvars != nvars:
                raise ValueError("coefficient lives in a different ring")
            c = clean[alpha] + c if alpha in clean else c
            if c.is_zero():
                clean.pop(alpha, None)
            else:
                clean[alpha] = c
        self._terms = clean
        self.nvars = nvars

    # constructors
    @classmethod
    def zero(cls, nvars: int = NVARS) -> "DiffOperator":
        return cls({}, nvars)

    @classmethod
    def multiplication(cls, p: Polynomial | Scalar, nvars: int = NVARS) -> "DiffOperator":
        if isinstance(p, Polynomial):
            nvars = p.nvars
        return cls({(0,) * nvars: p}, nvars)

    @classmethod
    def identity(cls, nvars: int = NVARS) -> "DiffOperator":
        return cls.multiplication(Polynomial.const(1, nvars), nvars)

    @classmethod
    def partial(cls, var: int, order: int = 1, nvars: int = NVARS) -> "DiffOperator":
        alpha = [0] * nvars
        alpha[int(var)] = order
        return cls({tuple(alpha): Polynomial.const(1, nvars)}, nvars)

    @classmethod
    def term(cls, coeff: Polynomial | Scalar, *vars_: int, nvars: int = NVARS) -> "DiffOperator":
        """``coeff * d_{v1} d_{v2} ...``."""
        if isinstance(coeff, Polynomial):
            nvars = coeff.nvars
        alpha = [0] * nvars
        for v in vars_:
            alpha[int(v)] += 1
        return cls({tuple(alpha): coeff}, nvars)

    # inspection
    @property
    def terms(self) -> dict[tuple[int, ...], Polynomial]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, alpha: Sequence[int]) -> Polynomial:
        return self._terms.get(tuple(alpha), Polynomial.zero(self.nvars))

    @property
    def order(self) -> int:
        return max((sum(a) for a in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def derivative_vars(self) -> set[int]:
        return {i for a in self._terms for i, k in enumerate(a) if k}

    def part_of_order(self, k: int) -> "DiffOperator":
        return DiffOperator({a: c for a, c in self._terms.items() if sum(a) == k}, self.nvars)

    # algebra
    def _coerce(self, other) -> "DiffOperator":
        if isinstance(other, DiffOperator):
            if other.nvars != self.nvars:
                raise ValueError("operators act on rings of different size")
            return other
        if isinstance(other, (Polynomial, int, Fraction)):
            return DiffOperator.multiplication(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out[a] + c if a in out else c
        return DiffOperator(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return DiffOperator({a: -c for a, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar | Polynomial) -> "DiffOperator":
        """Left multiplication by a scalar or polynomial."""
        if isinstance(c, Polynomial):
            return DiffOperator({a: c * v for a, v in self._terms.items()}, self.nvars)
        c = as_fraction(c)
        return DiffOperator({a: v.scale(c) for a, v in self._terms.items()}, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.scale(other)
        return NotImplemented

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)

    def substitute_coefficients(self, values: Mapping[int, Scalar]) -> "DiffOperator":
        """Freeze some variables inside the coefficients (classical parameters)."""
        return DiffOperator({a: c.partial_substitute(values) for a, c in self._terms.items()}, self.nvars)

    def restrict(self, keep: Sequence[int]) -> "DiffOperator":
        """Re-index onto the variables ``keep``; dropped variables may not appear at all."""
        keep = list(keep)
        out = {}
        for a, c in self._terms.items():
            if any(a[i] for i in range(self.nvars) if i not in keep):
                raise ValueError("operator differentiates a dropped variable")
            out[tuple(a[i] for i in keep)] = c.restrict(keep)
        return DiffOperator(out, len(keep))

    def __repr__(self):
        return f"DiffOperator({self.to_str()})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        if names is None:
            from .poly import RHO_NAMES
            names = RHO_NAMES if self.nvars == NVARS else tuple(f"x{i}" for i in range(self.nvars))
        parts = []
        for a in sorted(self._terms, key=lambda a: (-sum(a), tuple(-k for k in a))):
            d = "".join(f"d[{n}]" if k == 1 else f"d[{n}]^{k}" for n, k in zip(names, a) if k)
            parts.append(f"({self._terms[a].to_str(names)}){d}")
        return " + ".join(parts)


def apply(op: DiffOperator, p: Polynomial) -> Polynomial:
    total = Polynomial.zero(p.nvars)
    for alpha, c in op.items():
        dp = p.diff_multi(alpha)
        if not dp.is_zero():
            total = total + c * dp
    return total


def compose(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """``a o b`` as a normalized operator (Leibniz expansion)."""
    if a.nvars != b.nvars:
        raise ValueError("operators act on rings of different size")
    out: dict[tuple[int, ...], Polynomial] = {}
    for alpha, ca in a.items():
        for gamma, w in _sub_orders(alpha):
            rest = tuple(x - y for x, y in zip(alpha, gamma))
            for beta, cb in b.items():
                dcb = cb.diff_multi(gamma)
                if dcb.is_zero():
                    continue
                key = tuple(x + y for x, y in zip(rest, beta))
                contrib = (ca * dcb).scale(w)
                out[key] = out[key] + contrib if key in out else contrib
    return DiffOperator(out, a.nvars)


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return compose(a, b) - compose(b, a)


@dataclass(frozen=True)
class OperatorMatrix:
    """Column ``j`` holds the coordinates of ``op(basis[j])`` in the basis."""

    basis: tuple[tuple[int, ...], ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    def degree_slices(self) -> list[tuple[int, slice]]:
        out, start = [], 0
        degs = [sum(e) for e in self.basis]
        for n in sorted(set(degs)):
            stop = start + degs.count(n)
            out.append((n, slice(start, stop)))
            start = stop
        return out

    def block(self, n: int) -> list[list[Fraction]]:
        sl = dict(self.degree_slices())[n]
        return [list(row[sl]) for row in self.entries[sl]]

    def is_block_triangular(self) -> bool:
        """No entry maps a lower-degree column into a higher-degree row."""
        degs = [sum(e) for e in self.basis]
        return all(self.entries[i][j] == 0
                   for i in range(self.size) for j in range(self.size) if degs[i] > degs[j])

    def to_float(self):
        import numpy as np
        return np.array([[float(x) for x in row] for row in self.entries])


def matrix_on_basis(op: DiffOperator, N: int) -> OperatorMatrix:
    basis = graded_basis(N, op.nvars)
    index = {e: k for k, e in enumerate(basis)}
    cols = []
    for e in basis:
        img = apply(op, Polynomial({e: 1}, op.nvars))
        col = [Fraction(0)] * len(basis)
        for m, c in img.items():
            k = index.get(m)
            if k is None:
                raise FlagViolation(f"image of monomial {e} contains {m}, outside the degree-{N} space")
            col[k] = c
        cols.append(col)
    entries = tuple(tuple(cols[j][i] for j in range(len(basis))) for i in range(len(basis)))
    return OperatorMatrix(tuple(basis), entries)


def check_flag_preserving(op: DiffOperator, max_degree: int) -> None:
    """Raise FlagViolation unless every monomial of degree n <= max_degree maps to degree <= n."""
    for e in graded_basis(max_degree, op.nvars):
        img = apply(op, Polynomial({e: 1}, op.nvars))
        if img.degree > sum(e):
            raise FlagViolation(f"monomial {e} is raised to degree {img.degree}")


# gauge factors ---------------------------------------------------------------

def _log_derivatives(factors, exp_poly, x, nvars):
    """First and second derivatives of log F at x for F = exp(E) * prod A_k^alpha_k."""
    L = [Fraction(0)] * nvars
    H = [[Fraction(0)] * nvars for _ in range(nvars)]
    for A, alpha in factors:
        alpha = as_fraction(alpha)
        a0 = A.eval(x)
        if a0 == 0:
            raise SingularPoint("a gauge factor vanishes at the evaluation point")
        grad = [A.diff(i).eval(x) for i in range(nvars)]
        for i in range(nvars):
            L[i] += alpha * grad[i] / a0
        for i in range(nvars):
            Ai = A.diff(i)
            for j in range(i, nvars):
                hij = alpha * (Ai.diff(j).eval(x) / a0 - grad[i] * grad[j] / a0**2)
                H[i][j] += hij
                if j != i:
                    H[j][i] += hij
    if exp_poly is not None:
        for i in range(nvars):
            Ei = exp_poly.diff(i)
            L[i] += Ei.eval(x)
            for j in range(i, nvars):
                hij = Ei.diff(j).eval(x)
                H[i][j] += hij
                if j != i:
                    H[j][i] += hij
    return L, H


def apply_to_power_product(op: DiffOperator, factors: Sequence[tuple[Polynomial, Scalar]],
                           x: Sequence[Scalar], exp_poly: Polynomial | None = None) -> Fraction:
    """Exact value of ``[op F] / F`` at ``x`` for ``F = exp(E) * prod A_k^{alpha_k}``.

    Only the first and second partials of the ``A_k`` (and of ``E``) enter, so
    rational exponents are handled without ever forming a root.
    """
    if op.order > 2:
        raise ValueError("power-product evaluation supports operators of order <= 2")
    nvars = op.nvars
    x = [as_fraction(v) for v in x]
    L, H = _log_derivatives(factors, exp_poly, x, nvars)
    total = Fraction(0)
    for alpha, c in op.items():
        idx = [i for i, k in enumerate(alpha) for _ in range(k)]
        if not idx:
            ratio = Fraction(1)
        elif len(idx) == 1:
            ratio = L[idx[0]]
        else:
            i, j = idx
            ratio = L[i] * L[j] + H[i][j]
        total += c.eval(x) * ratio
    return total


def exp_ratio(op: DiffOperator, exponent: Polynomial) -> Polynomial:
    """``e^{-E} op e^{E}`` applied to 1, as a polynomial (order <= 2)."""
    if op.order > 2:
        raise ValueError("supports operators of order <= 2")
    total = Polynomial.zero(op.nvars)
    grads = [exponent.diff(i) for i in range(op.nvars)]
    for alpha, c in op.items():
        idx = [i for i, k in enumerate(alpha) for _ in range(k)]
        if not idx:
            r = Polynomial.const(1, op.nvars)
        elif len(idx) == 1:
            r = grads[idx[0]]
        else:
            i, j = idx
            r = grads[i] * grads[j] + grads[i].diff(j)
        total = total + c * r
    return total


def gauge_conjugate(op: DiffOperator, exponent: Polynomial) -> DiffOperator:
    """The operator ``e^{-E} o op o e^{E}`` for polynomial ``E`` (order <= 2)."""
    if op.order > 2:
        raise ValueError("supports operators of order <= 2")
    n = op.nvars
    grads = [exponent.diff(i) for i in range(n)]
    out: dict[tuple[int, ...], Polynomial] = {}

    def add(alpha, p):
        if not p.is_zero():
            out[alpha] = out[alpha] + p if alpha in out else p

    zero = (0,) * n
    for alpha, c in op.items():
        idx = [i for i, k in enumerate(alpha) for _ in range(k)]
        if not idx:
            add(zero, c)
        elif len(idx) == 1:
            i = idx[0]
            add(alpha, c)
            add(zero, c * grads[i])
        else:
            i, j = idx
            add(alpha, c)
            ei = tuple(1 if k == i else 0 for k in range(n))
            ej = tuple(1 if k == j else 0 for k in range(n))
            add(ej, c * grads[i])
            add(ei, c * grads[j])
            add(zero, c * (grads[i] * grads[j] + grads[i].diff(j)))
    return DiffOperator(out, n)


def euler_operator(nvars: int = NVARS) -> DiffOperator:
    return sum((DiffOperator.term(Polynomial.var(i, nvars), i) for i in range(nvars)),
               DiffOperator.zero(nvars))


def linear_combination(pairs: Iterable[tuple[Scalar, DiffOperator]], nvars: int = NVARS) -> DiffOperator:
    total = DiffOperator.zero(nvars)
    for c, op in pairs:
        total = total + op.scale(c)
    return total
