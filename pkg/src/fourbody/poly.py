"""Exact multivariate polynomials with rational coefficients.

Polynomials are immutable maps ``exponent tuple -> Fraction``.  The default
ring has the six pair variables of the four-body problem, ordered
``r12, r13, r14, r23, r24, r34``; the reduced representations reuse the same
class with one or two variables.
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]


class VarId(IntEnum):
    R12 = 0
    R13 = 1
    R14 = 2
    R23 = 3
    R24 = 4
    R34 = 5

    @property
    def pair(self) -> tuple[int, int]:
        return PAIRS[self.value]


PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
RHO_NAMES = tuple(f"r{i}{j}" for i, j in PAIRS)
NVARS = 6


def pair_index(i: int, j: int) -> int:
    """Index of the pair variable for particles ``i``, ``j`` (1-based, any order)."""
    if i > j:
        i, j = j, i
    return PAIRS.index((i, j))


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


class Polynomial:
    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Scalar] | None = None, nvars: int = NVARS):
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} does not have {nvars} entries")
                c = as_fraction(c)
                if c:
                    clean[tuple(exp)] = clean.get(tuple(exp), 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        # terms already normalized
        p = object.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    # constructors
    @classmethod
    def zero(cls, nvars: int = NVARS) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def const(cls, c: Scalar, nvars: int = NVARS) -> "Polynomial":
        c = as_fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = NVARS) -> "Polynomial":
        exp = [0] * nvars
        exp[int(i)] = 1
        return cls._raw({tuple(exp): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls({tuple(exp): coeff}, len(exp))

    @classmethod
    def linear(cls, coeffs: Sequence[Scalar], const: Scalar = 0) -> "Polynomial":
        n = len(coeffs)
        p = cls.const(const, n)
        terms = dict(p._terms)
        for i, c in enumerate(coeffs):
            c = as_fraction(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls._raw(terms, n)

    # inspection
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def homogeneous_part(self, n: int) -> "Polynomial":
        return Polynomial._raw({e: c for e, c in self._terms.items() if sum(e) == n}, self.nvars)

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in rings of different size")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Polynomial":
        c = as_fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({e: v * c for e, v in self._terms.items()}, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw({e: c for e, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # calculus and evaluation
    def diff(self, var: int, order: int = 1) -> "Polynomial":
        var = int(var)
        if order == 0:
            return self
        out = {}
        for e, c in self._terms.items():
            k = e[var]
            if k < order:
                continue
            f = 1
            for j in range(order):
                f *= k - j
            ne = list(e)
            ne[var] = k - order
            out[tuple(ne)] = c * f
        return Polynomial._raw(out, self.nvars)

    def diff_multi(self, dorder: Sequence[int]) -> "Polynomial":
        p = self
        for i, k in enumerate(dorder):
            if k:
                p = p.diff(i, k)
                if not p._terms:
                    break
        return p

    def __call__(self, point: Sequence[Scalar]) -> Fraction:
        return self.eval(point)

    def eval(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        pt = [as_fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    def eval_float(self, point: Sequence[float]) -> float:
        total = 0.0
        for e, c in self._terms.items():
            v = float(c)
            for x, k in zip(point, e):
                if k:
                    v *= x**k
            total += v
        return total

    def substitute(self, images: Sequence["Polynomial | Scalar"], nvars: int | None = None) -> "Polynomial":
        """Compose: replace variable ``i`` by ``images[i]`` (polynomials in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if nvars is None:
            nvars = next((q.nvars for q in images if isinstance(q, Polynomial)), self.nvars)
        imgs = [q if isinstance(q, Polynomial) else Polynomial.const(q, nvars) for q in images]
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.const(1, nvars)} for _ in imgs]

        def power(i: int, k: int) -> Polynomial:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * imgs[i]
            return cache[k]

        total = Polynomial.zero(nvars)
        for e, c in self._terms.items():
            term = Polynomial.const(c, nvars)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def partial_substitute(self, values: Mapping[int, Scalar]) -> "Polynomial":
        """Fix some variables to rational values, keeping the ring size."""
        out: dict[tuple[int, ...], Fraction] = {}
        vals = {int(k): as_fraction(v) for k, v in values.items()}
        for e, c in self._terms.items():
            ne = list(e)
            for i, v in vals.items():
                if ne[i]:
                    c = c * v ** ne[i]
                    ne[i] = 0
            if c:
                t = tuple(ne)
                out[t] = out.get(t, 0) + c
        return Polynomial._raw({e: c for e, c in out.items() if c}, self.nvars)

    def restrict(self, keep: Sequence[int]) -> "Polynomial":
        """Re-index into the ring of the variables ``keep``; other variables must be absent."""
        keep = [int(k) for k in keep]
        out = {}
        for e, c in self._terms.items():
            if any(e[i] for i in range(self.nvars) if i not in keep):
                raise ValueError("polynomial depends on a dropped variable")
            out[tuple(e[i] for i in keep)] = c
        return Polynomial._raw(out, len(keep))

    def embed(self, positions: Sequence[int], nvars: int) -> "Polynomial":
        """Inverse of :meth:`restrict`: place variable ``k`` at ``positions[k]``."""
        out = {}
        for e, c in self._terms.items():
            ne = [0] * nvars
            for k, p in enumerate(positions):
                ne[p] = e[k]
            out[tuple(ne)] = c
        return Polynomial._raw(out, nvars)

    def __repr__(self):
        return f"Polynomial({self.to_str()})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        if names is None:
            names = RHO_NAMES if self.nvars == NVARS else tuple(f"x{i}" for i in range(self.nvars))
        parts = []
        for e in sorted(self._terms, key=lambda e: (sum(e), tuple(-k for k in e))):
            c = self._terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def rho(i: int, j: int) -> Polynomial:
    """The pair variable rho_ij as a polynomial in the six-variable ring."""
    return Polynomial.var(pair_index(i, j))


def rho_vars() -> list[Polynomial]:
    return [Polynomial.var(k) for k in range(NVARS)]


def monomials_of_degree(n: int, nvars: int = NVARS) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree ``n`` in descending lexicographic order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), n):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def graded_basis(N: int, nvars: int = NVARS) -> list[tuple[int, ...]]:
    """Monomials of total degree <= N, by degree then descending lex.

    ``r12`` precedes ``r13`` inside the degree-1 block, so the basis reads
    ``1, r12, r13, ..., r34, r12^2, r12*r13, ...``.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    basis = []
    for n in range(N + 1):
        basis.extend(monomials_of_degree(n, nvars))
    assert len(basis) == comb(N + nvars, nvars)
    return basis


def poly_eval(p: Polynomial, x: Sequence[Scalar]) -> Fraction:
    return p.eval(x)


def partial_derivative(p: Polynomial, v: int, order: int = 1) -> Polynomial:
    if order < 0:
        raise ValueError("order must be non-negative")
    return p.diff(v, order)


def sum_polys(polys: Iterable[Polynomial], nvars: int = NVARS) -> Polynomial:
    total = Polynomial.zero(nvars)
    for p in polys:
        total = total + p
    return total
