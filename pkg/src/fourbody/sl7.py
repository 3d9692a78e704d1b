"""First-order realization of the affine part of sl(7) and the Lie-algebraic Hamiltonians."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .diffop import DiffOperator, FlagViolation, commutator, compose, matrix_on_basis
from .geometry import MassConfig
from .oscillator import GaugeParams, SpecialModel, _weighted, build_h_es, build_special
from .poly import NVARS, Polynomial, Scalar, as_fraction

KINDS = ("lower", "cartan", "euler", "raiser")


@dataclass(frozen=True, order=True)
class GeneratorId:
    """One generator; indices are 1-based as in ``u_1 .. u_6``."""

    kind: str
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        need = {"lower": 1, "cartan": 2, "euler": 0, "raiser": 1}[self.kind]
        idx = [v for v in (self.i, self.j) if v]
        if len(idx) != need or any(not 1 <= v <= NVARS for v in idx):
            raise ValueError(f"bad indices for {self.kind}: {self.i}, {self.j}")

    @classmethod
    def lower(cls, i: int) -> "GeneratorId":
        return cls("lower", i)

    @classmethod
    def cartan(cls, i: int, j: int) -> "GeneratorId":
        return cls("cartan", i, j)

    @classmethod
    def euler(cls) -> "GeneratorId":
        return cls("euler")

    @classmethod
    def raiser(cls, i: int) -> "GeneratorId":
        return cls("raiser", i)

    def __str__(self):
        return {"lower": f"J{self.i}^-", "cartan": f"J{self.i}{self.j}^0",
                "euler": "J^0", "raiser": f"J{self.i}^+"}[self.kind]


def all_generators() -> list[GeneratorId]:
    r = range(1, NVARS + 1)
    return ([GeneratorId.lower(i) for i in r] + [GeneratorId.cartan(i, j) for i in r for j in r]
            + [GeneratorId.euler()] + [GeneratorId.raiser(i) for i in r])


@lru_cache(maxsize=None)
def realize(gen: GeneratorId, N: Scalar = 0) -> DiffOperator:
    """Differential operator of ``gen``; ``N`` only enters the Euler and raising generators."""
    N = as_fraction(N)
    if gen.kind == "lower":
        return DiffOperator.partial(gen.i - 1)
    if gen.kind == "cartan":
        return DiffOperator.term(Polynomial.var(gen.i - 1), gen.j - 1)
    euler = sum((DiffOperator.term(Polynomial.var(k), k) for k in range(NVARS)), DiffOperator.zero())
    euler = euler - N
    if gen.kind == "euler":
        return euler
    return compose(DiffOperator.multiplication(Polynomial.var(gen.i - 1)), euler)


Word = tuple[GeneratorId, ...]


class AlgebraElement:
    """Rational combination of generator words (products kept in the written order)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        out: dict[Word, Fraction] = {}
        for w, c in (terms or {}).items():
            c = as_fraction(c)
            if c:
                out[tuple(w)] = out.get(tuple(w), Fraction(0)) + c
        self._terms = {w: c for w, c in out.items() if c}

    @classmethod
    def gen(cls, g: GeneratorId, coeff: Scalar = 1) -> "AlgebraElement":
        return cls({(g,): coeff})

    @classmethod
    def unit(cls, coeff: Scalar = 1) -> "AlgebraElement":
        return cls({(): coeff})

    @property
    def terms(self) -> dict[Word, Fraction]:
        return dict(self._terms)

    def max_word_length(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        t = dict(self._terms)
        for w, c in other._terms.items():
            t[w] = t.get(w, Fraction(0)) + c
        return AlgebraElement(t)

    def __neg__(self):
        return AlgebraElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            t: dict[Word, Fraction] = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    t[w1 + w2] = t.get(w1 + w2, Fraction(0)) + c1 * c2
            return AlgebraElement(t)
        c = as_fraction(other)
        return AlgebraElement({w: c * v for w, v in self._terms.items()})

    def __rmul__(self, other):
        c = as_fraction(other)
        return AlgebraElement({w: c * v for w, v in self._terms.items()})

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def realize(self, N: Scalar = 0) -> DiffOperator:
        total = DiffOperator.zero()
        for w, c in sorted(self._terms.items()):
            op = DiffOperator.identity()
            for g in w:
                op = compose(op, realize(g, N))
            total = total + op.scale(c)
        return total

    def __repr__(self):
        parts = []
        for w, c in sorted(self._terms.items()):
            parts.append(f"{c}*" + "*".join(map(str, w)) if w else str(c))
        return " + ".join(parts) or "0"


def Jm(i: int) -> AlgebraElement:
    return AlgebraElement.gen(GeneratorId.lower(i))


def J0(i: int, j: int) -> AlgebraElement:
    return AlgebraElement.gen(GeneratorId.cartan(i, j))


def Jp(i: int) -> AlgebraElement:
    return AlgebraElement.gen(GeneratorId.raiser(i))


def J_euler() -> AlgebraElement:
    return AlgebraElement.gen(GeneratorId.euler())


_TOKEN = re.compile(r"([+-]?)(\d)(\d)")


def cartan_sum(spec: str) -> AlgebraElement:
    """``"11+21-41"`` -> ``J11^0 + J21^0 - J41^0``."""
    out = AlgebraElement()
    pos = 0
    for m in _TOKEN.finditer(spec.replace(" ", "")):
        if m.start() != pos:
            raise ValueError(f"cannot parse {spec!r}")
        pos = m.end()
        out = out + J0(int(m.group(2)), int(m.group(3))) * (-1 if m.group(1) == "-" else 1)
    if pos != len(spec.replace(" ", "")):
        raise ValueError(f"cannot parse {spec!r}")
    return out


# ---------------------------------------------------------------- relations

@dataclass
class RelationCheck:
    name: str
    ok: bool
    residual: DiffOperator = field(default_factory=DiffOperator.zero)


def verify_algebra_relations(N: Scalar = 0) -> list[RelationCheck]:
    """Every commutator of the realized generators against its expected value."""
    N = as_fraction(N)
    r = range(1, NVARS + 1)
    R = lambda g: realize(g, N)
    lo = {i: R(GeneratorId.lower(i)) for i in r}
    ca = {(i, j): R(GeneratorId.cartan(i, j)) for i in r for j in r}
    up = {i: R(GeneratorId.raiser(i)) for i in r}
    eu = R(GeneratorId.euler())
    zero = DiffOperator.zero()
    checks: list[RelationCheck] = []

    def record(name, lhs, rhs):
        res = lhs - rhs
        checks.append(RelationCheck(name, res.is_zero(), res))

    for (i, j), a in ca.items():
        for (k, l), b in ca.items():
            rhs = (ca[(i, l)] if j == k else zero) - (ca[(k, j)] if l == i else zero)
            record(f"[J{i}{j}^0,J{k}{l}^0]", commutator(a, b), rhs)
    for i in r:
        for (j, k), b in ca.items():
            record(f"[J{i}^-,J{j}{k}^0]", commutator(lo[i], b), lo[k] if i == j else zero)
            record(f"[J{j}{k}^0,J{i}^+]", commutator(b, up[i]), up[j] if k == i else zero)
        for j in r:
            record(f"[J{i}^-,J{j}^-]", commutator(lo[i], lo[j]), zero)
            record(f"[J{i}^+,J{j}^+]", commutator(up[i], up[j]), zero)
            record(f"[J{i}^-,J{j}^+]", commutator(lo[i], up[j]), (eu if i == j else zero) + ca[(j, i)])
        record(f"[J^0,J{i}^-]", commutator(eu, lo[i]), -lo[i])
        record(f"[J^0,J{i}^+]", commutator(eu, up[i]), up[i])
    return checks


def affine_closure_check(N: Scalar = 0) -> bool:
    """The span of lowering and Cartan generators is closed under commutators.

    That span is exactly the first-order operators without a zeroth-order part
    whose coefficients have degree at most one.
    """
    gens = [g for g in all_generators() if g.kind in ("lower", "cartan")]
    ops = {g: realize(g, N) for g in gens}
    for a in gens:
        for b in gens:
            for alpha, coeff in commutator(ops[a], ops[b]).items():
                if sum(alpha) != 1 or coeff.degree > 1:
                    return False
    return True


def flag_action_check(N: int) -> dict[str, bool]:
    """For each generator with parameter ``N``: does it map ``P_N`` into itself?"""
    out = {}
    for g in all_generators():
        try:
            matrix_on_basis(realize(g, N), N)
            out[str(g)] = True
        except FlagViolation:
            out[str(g)] = False
    return out


# ---------------------------------------------------------------- Lie-algebraic Hamiltonians

# pairs of variables sharing a particle: particle -> [(k, l, "Cartan combination")]
_CROSS = {
    1: [(2, "11+21-41"), (3, "11+31-51"), (3, "22+32-62")],
    2: [(4, "11+41-21"), (5, "11+51-31"), (5, "44+54-64")],
    3: [(4, "22+42-12"), (6, "22+62-32"), (6, "44+64-54")],
    4: [(5, "33+53-13"), (6, "33+63-23"), (6, "55+65-45")],
}

# drift terms: (gauge name, pair of mu, particle of 1/m, Cartan combination)
_DRIFT = [
    ("b", (1, 3), 1, "11+21-41"), ("e", (2, 3), 2, "11-21+41"),
    ("c", (1, 4), 1, "11+31-51"), ("f", (2, 4), 2, "11-31+51"),
    ("a", (1, 2), 1, "12+22-42"), ("c", (1, 4), 1, "22-62+32"),
    ("e", (2, 3), 3, "42+22-12"), ("g", (3, 4), 3, "62-32+22"),
    ("a", (1, 2), 1, "33+13-53"), ("b", (1, 3), 1, "33+23-63"),
    ("f", (2, 4), 4, "33+53-13"), ("g", (3, 4), 4, "33+63-23"),
    ("a", (1, 2), 2, "44+14-24"), ("b", (1, 3), 3, "44+24-14"),
    ("f", (2, 4), 2, "44+54-64"), ("g", (3, 4), 3, "44+64-54"),
    ("a", (1, 2), 2, "55+15-35"), ("c", (1, 4), 4, "55+35-15"),
    ("e", (2, 3), 2, "55+45-65"), ("g", (3, 4), 4, "55+65-45"),
    ("b", (1, 3), 3, "66+26-36"), ("c", (1, 4), 4, "66+36-26"),
    ("e", (2, 3), 3, "66+46-56"), ("f", (2, 4), 4, "66+56-46"),
]

_PAIRS = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def h_es_algebra(mc: MassConfig, gp: GaugeParams, d: Scalar) -> AlgebraElement:
    """The gauged Hamiltonian written in the generators (lowering and Cartan only)."""
    d = as_fraction(d)
    gauge = dict(zip("abcefg", gp.values))
    h = AlgebraElement()
    for k, (i, j) in enumerate(_PAIRS, start=1):
        inv = mc.inv_mu(i, j)
        h = h - (J0(k, k) * Jm(k)) * (2 * inv) - Jm(k) * (d * inv)
    for p, rows in _CROSS.items():
        kp = mc.kappa[p - 1]
        for l, combo in rows:
            h = h - (cartan_sum(combo) * Jm(l)) * (2 * kp)
    drift = AlgebraElement()
    for k, name in enumerate("abcefg", start=1):
        drift = drift + J0(k, k) * (2 * gauge[name])
    for name, (i, j), p, combo in _DRIFT:
        w = _weighted(gauge[name], mc.kappa[p - 1], mc.inv_mu(i, j))
        drift = drift + cartan_sum(combo) * w
    return h + drift * (2 * gp.omega)


def h_es_from_generators(mc: MassConfig, gp: GaugeParams, d: Scalar) -> DiffOperator:
    return h_es_algebra(mc, gp, d).realize()


def _sum_terms(entries: Iterable[tuple[Scalar, AlgebraElement]]) -> AlgebraElement:
    out = AlgebraElement()
    for c, e in entries:
        out = out + e * c
    return out


def _cross_all(particles=(1, 2, 3, 4)) -> AlgebraElement:
    return _sum_terms((1, cartan_sum(combo) * Jm(l)) for p in particles for l, combo in _CROSS[p])


def special_lie_form(variant: str, gp: GaugeParams, d: Scalar, m: Scalar = 1,
                     literal: bool = False) -> AlgebraElement:
    """Lie-algebraic operator of a mass family as displayed.

    ``literal=True`` keeps the printed misprints.  In the uniform equal-mass
    form a bracket closes after the particle-1 cross terms.  In the two-center
    form the first-order ``d`` part carries the weights of the atomic case, and
    the ``f`` drift reads ``J56 J54 - J64 - J46`` where the 1<->2 image of the
    ``c`` drift, ``J56 + J53 - J46 - J13``, is needed.  The default gives the
    repaired version.
    """
    d, m = as_fraction(d), as_fraction(m)
    a, b, c, e, f, g = gp.values
    w = gp.omega
    diag = lambda coeffs: _sum_terms((co, J0(k, k) * Jm(k)) for k, co in enumerate(coeffs, 1) if co)
    lows = lambda coeffs: _sum_terms((co, Jm(k)) for k, co in enumerate(coeffs, 1) if co)
    cart = lambda coeffs: _sum_terms((co, J0(k, k)) for k, co in enumerate(coeffs, 1) if co)
    if variant in ("equal", "equal-uniform"):
        head = diag([1] * 6) * (-4 / m) - lows([1] * 6) * (2 * d / m)
        if variant == "equal-uniform" and literal:
            cross = _cross_all((1,)) * (-2 / m) + _cross_all((2, 3, 4))
        else:
            cross = _cross_all() * (-2 / m)
        if variant == "equal-uniform":
            return head + cross + cart([1] * 6) * (8 * a * w)
        pairs = [("21-41", b - e), ("31-51", c - f), ("12-42", a - e), ("32-62", c - g),
                 ("13-53", a - f), ("23-63", b - g), ("14-24", a - b), ("54-64", f - g),
                 ("15-35", a - c), ("45-65", e - g), ("26-36", b - c), ("46-56", e - f)]
        drift = cart([4 * a + b + c + e + f, 4 * b + a + c + e + g, 4 * c + a + b + f + g,
                      4 * e + a + b + f + g, 4 * f + a + c + e + g, 4 * g + b + c + e + f])
        drift = drift + _sum_terms((co, cartan_sum(s)) for s, co in pairs)
        return head + cross + drift * w
    if variant == "atomic":
        head = diag([1, 1, 1, 2, 2, 2]) * (-2 / m) - lows([1, 1, 1, 2, 2, 2]) * (d / m)
        cross = _cross_all((2, 3, 4)) * (-2 / m)
        drift = cart([4 * a + e + f, 4 * b + e + g, 4 * c + f + g, 4 * e + 2 * a + 2 * b + f + g,
                      4 * f + 2 * a + 2 * c + e + g, 4 * g + 2 * b + 2 * c + e + f])
        drift = drift + _sum_terms([
            (2 * a, cartan_sum("15+14-35-24")), (2 * b, cartan_sum("26+24-36-14")),
            (2 * c, cartan_sum("36+35-26-15")), (e, cartan_sum("45+41+42+46-12-56-21-65")),
            (f, cartan_sum("56+51+54+53-64-13-31-46")), (g, cartan_sum("65+64+62+63-54-32-45-23"))])
        return head + cross + drift * w
    if variant == "molecular":
        head = diag([0, 1, 1, 1, 1, 2]) * (-2 / m)
        head = head - lows([1, 1, 1, 2, 2, 2] if literal else [0, 1, 1, 1, 1, 2]) * (d / m)
        cross = _cross_all((3, 4)) * (-2 / m)
        f_term = (J0(5, 6) * J0(5, 4) - cartan_sum("64+46")) if literal else cartan_sum("56+53-46-13")
        drift = cart([0, 4 * b + 2 * e + g, 4 * c + 2 * f + g, 4 * e + 2 * b + g, 4 * f + 2 * c + g,
                      4 * g + 2 * b + 2 * c + 2 * e + 2 * f])
        drift = drift + _sum_terms([
            (2 * b, cartan_sum("26+24-36-14")), (2 * c, cartan_sum("36+35-26-15")),
            (2 * e, cartan_sum("42+46-12-56")), (2 * f, f_term),
            (g, cartan_sum("65+64+62+63-54-32-45-23"))])
        return head + cross + drift * w
    if variant == "three-center":
        head = diag([0, 0, 1, 0, 1, 1]) * (-2 / m) - lows([0, 0, 1, 0, 1, 1]) * (d / m)
        cross = _cross_all((4,)) * (-2 / m)
        drift = cart([0, 0, 2 * c + f + g, 0, 2 * f + c + g, 2 * g + f + c])
        drift = drift + _sum_terms([
            (c, cartan_sum("35+36-15-26")), (f, cartan_sum("53+56-13-46")),
            (g, cartan_sum("63+65-23-45"))])
        return head + cross + drift * (2 * w)
    raise ValueError(f"no Lie-algebraic form for {variant!r}")


def special_reference(variant: str, gp: GaugeParams, d: Scalar, m: Scalar = 1) -> DiffOperator:
    """The directly built operator the family form is compared against."""
    if variant in ("equal", "equal-uniform"):
        return build_h_es(MassConfig.equal(m), gp, d)
    return build_special(SpecialModel(variant, as_fraction(m)), gp, d)


def lie_form_discrepancy(variant: str, gp: GaugeParams, d: Scalar, m: Scalar = 1,
                         literal: bool = False) -> DiffOperator:
    """Displayed family form minus the directly built operator (zero when they agree)."""
    return special_lie_form(variant, gp, d, m, literal).realize() - special_reference(variant, gp, d, m)
