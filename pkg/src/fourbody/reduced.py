"""Volume-variable representations of the radial Laplacian.

Functions of the scaled moment of inertia ``P`` alone are mapped by
``Delta_rad`` into functions of ``P``; the induced one-variable operator is
``2P d^2 + 3d d``.  The two-variable ``(P, S)`` version is checked by the
chain rule too, and the check does not close: the gradient pairings are

    g(dP, dP) = 2P,   g(dP, dS) = 4S,   g(dS, dS) = 8MPS + 3456 M m1m2m3m4 V4^2,

so a mixed ``d_P d_S`` term is needed, and ``d_S^2`` carries the squared
volume, which is not a function of ``(P, S)``.

The one-variable model also hosts an sl(2) quasi-exactly-solvable sextic
problem and the Laguerre family of its exactly-solvable limit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
import numpy as np

from .diffop import DiffOperator, apply, apply_to_power_product, gauge_conjugate, matrix_on_basis
from .errors import FlagViolation, IdentityFailure
from .exact import charpoly, rank
from .geometry import MassConfig, cometric_polys, v4_squared_poly
from .oscillator import build_delta_rad
from .poly import PAIRS, Polynomial, Scalar, as_fraction

P_VAR, S_VAR = 0, 1


# ------------------------------------------------------------ volume variables

@dataclass(frozen=True)
class VolumeVars:
    P: Polynomial
    S: Polynomial


def _heron_bracket(a: Polynomial, b: Polynomial, c: Polynomial) -> Polynomial:
    return (a * b + a * c + b * c).scale(2) - a * a - b * b - c * c


def volume_vars(mc: MassConfig) -> VolumeVars:
    """``P = sum m_i m_j rho_ij / M`` and the mass-weighted sum of face Heron brackets."""
    if not mc.is_finite:
        raise ValueError("volume variables need four finite masses")
    m = mc.masses
    P = Polynomial.linear([m[i - 1] * m[j - 1] / mc.total for i, j in PAIRS])
    S = Polynomial.zero()
    for face in itertools.combinations((1, 2, 3, 4), 3):
        edges = [Polynomial.var(PAIRS.index(p)) for p in itertools.combinations(face, 2)]
        weight = m[face[0] - 1] * m[face[1] - 1] * m[face[2] - 1]
        S = S + _heron_bracket(*edges).scale(weight)
    return VolumeVars(P, S)


# ------------------------------------------------------------ reduced operators

def build_delta_P(d: Scalar) -> DiffOperator:
    d = as_fraction(d)
    P = Polynomial.var(0, 1)
    return DiffOperator.term(P.scale(2), 0, 0) + DiffOperator.term(Polynomial.const(3 * d, 1), 0)


def build_delta_LB_P() -> DiffOperator:
    """Laplace-Beltrami operator for the one-dimensional metric ``g^11 = 2P``."""
    P = Polynomial.var(0, 1)
    return DiffOperator.term(P.scale(2), 0, 0) + DiffOperator.term(Polynomial.const(1, 1), 0)


def effective_potential_coefficient(d: Scalar) -> Fraction:
    """``c`` in ``U_eff = c / P``."""
    d = as_fraction(d)
    return 3 * (d - 1) * (3 * d - 1) / 8


def build_delta_PS(mc: MassConfig, d: Scalar) -> DiffOperator:
    """The displayed two-variable operator, with variable 0 = P and 1 = S."""
    d, M = as_fraction(d), mc.total
    P, S = Polynomial.var(P_VAR, 2), Polynomial.var(S_VAR, 2)
    return (DiffOperator.term(P.scale(2), P_VAR, P_VAR)
            + DiffOperator.term((P * S).scale(8 * M), S_VAR, S_VAR)
            + DiffOperator.term(P.scale(8 * M * (d - 1)), S_VAR)
            + DiffOperator.term(Polynomial.const(3 * d, 2), P_VAR))


def _pairing(g, f: Polynomial, h: Polynomial) -> Polynomial:
    total = Polynomial.zero()
    grad_f = [f.diff(a) for a in range(len(g))]
    grad_h = [h.diff(b) for b in range(len(g))]
    for a, fa in enumerate(grad_f):
        if fa.is_zero():
            continue
        for b, hb in enumerate(grad_h):
            if not hb.is_zero() and not g[a][b].is_zero():
                total = total + g[a][b] * fa * hb
    return total


@dataclass(frozen=True)
class ChainRuleData:
    """Everything the chain rule needs for functions of ``(P, S)``."""

    laplacian_P: Polynomial
    laplacian_S: Polynomial
    g_PP: Polynomial
    g_PS: Polynomial
    g_SS: Polynomial


def chain_rule_data(mc: MassConfig, d: Scalar) -> ChainRuleData:
    vv = volume_vars(mc)
    lap = build_delta_rad(mc, d)
    g = cometric_polys(mc)
    return ChainRuleData(apply(lap, vv.P), apply(lap, vv.S),
                         _pairing(g, vv.P, vv.P), _pairing(g, vv.P, vv.S), _pairing(g, vv.S, vv.S))


@dataclass(frozen=True)
class ReductionResult:
    """Residual ``Delta_rad(f(rho)) - (D f)(P(rho), S(rho))`` for one monomial."""

    exponents: tuple[int, ...]
    residual: Polynomial

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def reduction_check(mc: MassConfig, d: Scalar, N_test: int, mixed: bool = False) -> list[ReductionResult]:
    """Chain-rule test of the reduced operators on monomials up to total degree ``N_test``.

    Without ``mixed`` the monomials are ``P^k`` against ``Delta_P``; with it
    they are ``P^j S^k`` (``k >= 1``) against the displayed ``(P, S)`` operator.
    """
    vv = volume_vars(mc)
    lap = build_delta_rad(mc, d)
    out = []
    if not mixed:
        dP = build_delta_P(d)
        for k in range(N_test + 1):
            reduced = apply(dP, Polynomial.monomial((k,)))
            res = apply(lap, vv.P ** k) - reduced.substitute([vv.P])
            out.append(ReductionResult((k,), res))
        return out
    dPS = build_delta_PS(mc, d)
    for total in range(1, N_test + 1):
        for k in range(1, total + 1):
            j = total - k
            reduced = apply(dPS, Polynomial.monomial((j, k)))
            res = apply(lap, vv.P ** j * vv.S ** k) - reduced.substitute([vv.P, vv.S])
            out.append(ReductionResult((j, k), res))
    return out


@dataclass(frozen=True)
class ClosureVerdict:
    """Whether ``Delta_rad`` restricted to functions of ``(P, S)`` closes.

    ``cross_coefficient`` is the missing coefficient of ``d_P d_S`` (as a
    polynomial in ``rho``); ``ss_remainder`` is ``g(dS, dS) - 8MPS``, and
    ``volume_coefficient`` is ``kappa`` with ``ss_remainder = kappa V4^2``
    when that holds.
    """

    laplacian_S_matches: bool
    cross_coefficient: Polynomial
    cross_is_4S: bool
    ss_remainder: Polynomial
    volume_coefficient: Fraction | None
    ss_in_PS: bool

    @property
    def displayed_complete(self) -> bool:
        return self.laplacian_S_matches and self.cross_coefficient.is_zero() and self.ss_remainder.is_zero()

    @property
    def closes(self) -> bool:
        """True when some (P, S) operator exists, cross term allowed."""
        return self.laplacian_S_matches and self.ss_in_PS


def ps_closure_verdict(mc: MassConfig, d: Scalar) -> ClosureVerdict:
    d = as_fraction(d)
    vv = volume_vars(mc)
    data = chain_rule_data(mc, d)
    M = mc.total
    lap_ok = data.laplacian_S == vv.P.scale(8 * M * (d - 1))
    cross = data.g_PS.scale(2)
    remainder = data.g_SS - (vv.P * vv.S).scale(8 * M)
    v4 = v4_squared_poly()
    kappa = None
    if not remainder.is_zero():
        exp, c = next(iter(v4.items()))
        trial = remainder.coefficient(exp) / c
        if remainder == v4.scale(trial):
            kappa = trial
    # g(dS, dS) is a cubic; the only cubic monomials in (P, S) are PS and P^3
    candidates = [vv.P * vv.S, vv.P ** 3]
    monos = sorted({e for p in candidates + [data.g_SS] for e in p.terms})
    rows = [[p.coefficient(e) for e in monos] for p in candidates]
    in_span = rank(rows + [[data.g_SS.coefficient(e) for e in monos]]) == rank(rows)
    return ClosureVerdict(lap_ok, cross, data.g_PS == vv.S.scale(4), remainder, kappa, in_span)


# ------------------------------------------------------------ sl(2) generators

@dataclass(frozen=True)
class SL2Generator:
    tag: str
    N: int = 0

    def __post_init__(self):
        if self.tag not in ("Jplus", "Jzero", "Jminus"):
            raise ValueError(f"unknown sl(2) generator {self.tag!r}")

    def operator(self) -> DiffOperator:
        P = Polynomial.var(0, 1)
        N = self.N
        if self.tag == "Jminus":
            return DiffOperator.partial(0, nvars=1)
        if self.tag == "Jzero":
            return DiffOperator.term(P.scale(2), 0) - DiffOperator.multiplication(Polynomial.const(N, 1))
        return DiffOperator.term(P * P, 0) - DiffOperator.multiplication(P.scale(N))


@dataclass(frozen=True)
class QesParams:
    A: Fraction
    N: int
    omega: Fraction
    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "A", as_fraction(self.A))
        object.__setattr__(self, "omega", as_fraction(self.omega))
        object.__setattr__(self, "d", as_fraction(self.d))
        if self.A < 0:
            raise ValueError("A must be non-negative")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if int(self.N) != self.N or self.N < 0:
            raise ValueError("N must be a non-negative integer")

    @property
    def exactly_solvable(self) -> bool:
        return self.A == 0


def h_qes(q: QesParams) -> DiffOperator:
    """``-J- J0 - (3d+N-2) J- + 4A J+ + 2 omega J0 + 2 N omega`` built from the generators."""
    Jp = SL2Generator("Jplus", q.N).operator()
    J0 = SL2Generator("Jzero", q.N).operator()
    Jm = SL2Generator("Jminus").operator()
    const = DiffOperator.multiplication(Polynomial.const(2 * q.N * q.omega, 1))
    return (-(Jm @ J0) - Jm.scale(3 * q.d + q.N - 2) + Jp.scale(4 * q.A)
            + J0.scale(2 * q.omega) + const)


def gauged_operator(q: QesParams) -> DiffOperator:
    """``-Delta_P + 4P(AP + omega) d_P``: the oscillator frame after removing the ground state."""
    P = Polynomial.var(0, 1)
    drift = (P * P).scale(4 * q.A) + P.scale(4 * q.omega)
    return -build_delta_P(q.d) + DiffOperator.term(drift, 0)


def ground_exponent(q: QesParams) -> Polynomial:
    P = Polynomial.var(0, 1)
    return -(P.scale(q.omega) + (P * P).scale(q.A / 2))


@dataclass(frozen=True)
class LaurentPotential:
    """``c_{-1}/P + c_0 + c_1 P + c_2 P^2 + c_3 P^3``."""

    coeffs: dict

    def __call__(self, P: Scalar) -> Fraction:
        P = as_fraction(P)
        return sum((c * P**k for k, c in self.coeffs.items()), Fraction(0))

    def polynomial_part(self) -> Polynomial:
        return Polynomial({(k,): c for k, c in self.coeffs.items() if k >= 0}, 1)

    def describe(self) -> str:
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if c:
                parts.append(f"{c}" if k == 0 else f"{c}*P^{k}" if k != 1 else f"{c}*P")
        return " + ".join(parts) or "0"


def ground_potential(q: QesParams) -> LaurentPotential:
    """Potential whose ground state is ``P^{(3d-1)/4} exp(-omega P - A P^2/2)``, with energy 3d omega."""
    A, w, d = q.A, q.omega, q.d
    return LaurentPotential({-1: effective_potential_coefficient(d), 0: Fraction(0),
                             1: 2 * w * w - A * (3 * d + 2), 2: 4 * A * w, 3: 2 * A * A})


def qes_potential(q: QesParams, literal: bool = False) -> LaurentPotential:
    """Sextic potential whose low levels are polynomial times the ground state.

    The linear term is ``-A(3d + 2 + 4N) P``; ``literal=True`` gives the
    ``-A(3d + 2 - 4N) P`` variant, kept for the discrepancy report.
    """
    base = ground_potential(q)
    coeffs = dict(base.coeffs)
    sign = 1 if literal else -1
    coeffs[1] += sign * 4 * q.N * q.A
    coeffs[0] += 2 * q.N * q.omega
    return LaurentPotential(coeffs)


def potential_preserves_flag(q: QesParams, literal: bool = False) -> bool:
    """Conjugate ``-Delta_P + V`` (without the 1/P part) by the ground state; test on P_N."""
    V = qes_potential(q, literal)
    op = -build_delta_P(q.d) + DiffOperator.multiplication(V.polynomial_part())
    gauged = gauge_conjugate(op, ground_exponent(q))
    try:
        matrix_on_basis(gauged, q.N)
    except FlagViolation:
        return False
    return True


def ground_state_ratio(q: QesParams, P: Scalar) -> Fraction:
    """``[(-Delta_LB + V_0) psi_0] / psi_0`` at ``P``, computed with exact exponents."""
    lb = -build_delta_LB_P()
    ratio = apply_to_power_product(lb, [(Polynomial.var(0, 1), (3 * q.d - 1) / 4)], [P],
                                   exp_poly=ground_exponent(q))
    return ratio + ground_potential(q)(P)


def gamma_gauge_residual(d: Scalar, k: int, P: Scalar) -> Fraction:
    """Check of ``Gamma^{-1}(-Delta_P)Gamma = -Delta_LB + U_eff`` on ``P^k`` at one point."""
    d = as_fraction(d)
    x = Polynomial.var(0, 1)
    lhs = apply_to_power_product(-build_delta_P(d), [(x, k - (3 * d - 1) / 4)], [P])
    rhs = apply_to_power_product(-build_delta_LB_P(), [(x, k)], [P]) + effective_potential_coefficient(d) / as_fraction(P)
    return lhs - rhs


# ------------------------------------------------------------ exact quadratic surds

def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    return Fraction(n, d) if n * n == x.numerator and d * d == x.denominator else None


@dataclass(frozen=True)
class Surd:
    """``a + b sqrt(r)`` with rational ``a, b, r``; arithmetic needs a shared ``r``."""

    a: Fraction
    b: Fraction
    r: Fraction

    @classmethod
    def rational(cls, a: Scalar, r: Scalar) -> "Surd":
        return cls(as_fraction(a), Fraction(0), as_fraction(r))

    def _lift(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.r != self.r:
                raise ValueError("surds with different radicands")
            return other
        return Surd.rational(other, self.r)

    def __add__(self, other):
        o = self._lift(other)
        return Surd(self.a + o.a, self.b + o.b, self.r)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.r)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return Surd(self.a * o.a + self.b * o.b * self.r, self.a * o.b + self.b * o.a, self.r)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        if self.b == 0 or self.r == 0:
            return self.a == 0
        root = _rational_sqrt(self.r)
        return root is not None and self.a + self.b * root == 0

    def __float__(self):
        return float(self.a) + float(self.b) * float(self.r) ** 0.5


@dataclass(frozen=True)
class ExactEigenpair:
    value: Surd
    coefficients: tuple[Surd, ...]  # of 1, P, ..., P^N

    def residual(self, matrix) -> list[Surd]:
        n = len(self.coefficients)
        return [sum((self.coefficients[j] * matrix[i][j] for j in range(n)), Surd.rational(0, self.value.r))
                - self.value * self.coefficients[i] for i in range(n)]


def qes_exact_pairs_N1(q: QesParams) -> tuple[ExactEigenpair, ExactEigenpair]:
    """Closed-form eigenpairs on ``{1, P}``: ``lambda^2 - 4 omega lambda - 12 d A = 0``.

    The polynomial ``-3d + lambda P`` is an eigenvector for either root.
    """
    if q.N != 1:
        raise ValueError("closed form is for N = 1")
    r = 4 * q.omega**2 + 12 * q.d * q.A
    pairs = []
    for s in (1, -1):
        lam = Surd(2 * q.omega, Fraction(s), r)
        pairs.append(ExactEigenpair(lam, (Surd.rational(-3 * q.d, r), lam)))
    return tuple(pairs)


@dataclass(frozen=True)
class QesModel:
    params: QesParams
    potential: LaurentPotential
    matrix: tuple[tuple[Fraction, ...], ...]
    charpoly: tuple[Fraction, ...]
    eigenvalues: tuple[float, ...]
    eigenvectors: tuple[tuple[float, ...], ...]
    residual: float
    real: bool

    @property
    def energies(self) -> tuple[float, ...]:
        """Levels of ``-Delta_LB + V^(qes)``: ``3d omega + 2N omega + lambda``."""
        shift = float(3 * self.params.d * self.params.omega + 2 * self.params.N * self.params.omega)
        return tuple(shift + lam for lam in self.eigenvalues)

    def wavefunction(self, k: int) -> str:
        q = self.params
        pol = " + ".join(f"{c:.12g}*P^{j}" for j, c in enumerate(self.eigenvectors[k]))
        return f"({pol}) * P^({(3 * q.d - 1) / 4}) * exp(-{q.omega}*P - {q.A / 2}*P^2)"


def qes_model(q: QesParams) -> QesModel:
    """Matrix of ``h^(qes)`` on ``{1, P, ..., P^N}`` with a float eigen-solve."""
    h = h_qes(q)
    mat = matrix_on_basis(h, q.N)
    # the one-variable graded basis is already 1, P, ..., P^N
    entries = mat.entries
    cp = tuple(charpoly(entries))
    a = mat.to_float()
    vals, vecs = np.linalg.eig(a)
    real = bool(np.abs(vals.imag).max() <= 1e-9 * max(1.0, np.abs(vals).max()))
    order = np.argsort(vals.real)
    vals, vecs = vals[order], vecs[:, order]
    res = max(float(np.linalg.norm(a @ vecs[:, k] - vals[k] * vecs[:, k])) for k in range(len(vals)))
    if res > 1e-8 * max(1.0, float(np.abs(a).max())):
        raise IdentityFailure(f"QES eigen-solve residual {res:.2e}")
    vecs = vecs / vecs[np.argmax(np.abs(vecs), axis=0), range(vecs.shape[1])]
    return QesModel(q, qes_potential(q), entries, cp, tuple(vals.real.tolist()),
                    tuple(tuple(vecs[:, k].real.tolist()) for k in range(vecs.shape[1])), res, real)


# ------------------------------------------------------------ Laguerre family

def laguerre(n: int, alpha: Scalar) -> Polynomial:
    """Generalized Laguerre polynomial in one variable, by the three-term recurrence."""
    alpha = as_fraction(alpha)
    x = Polynomial.var(0, 1)
    prev, cur = Polynomial.const(0, 1), Polynomial.const(1, 1)
    for k in range(n):
        nxt = ((x.scale(-1) + (2 * k + 1 + alpha)) * cur - prev.scale(k + alpha)).scale(Fraction(1, k + 1))
        prev, cur = cur, nxt
    return cur


@dataclass(frozen=True)
class LaguerreLevel:
    N: int
    polynomial: Polynomial  # in P
    energy: Fraction
    residual: Polynomial

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def es_laguerre(d: Scalar, omega: Scalar, N: int) -> LaguerreLevel:
    """``L_N^{((3d-2)/2)}(2 omega P)`` and ``epsilon_N = (3d + 4N) omega``.

    The residual is ``(-Delta_P + 4 omega P d_P) L - 4 N omega L``.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    d, omega = as_fraction(d), as_fraction(omega)
    if omega <= 0:
        raise ValueError("omega must be positive")
    L = laguerre(N, (3 * d - 2) / 2).substitute([Polynomial.var(0, 1).scale(2 * omega)])
    op = gauged_operator(QesParams(0, N, omega, d))
    res = apply(op, L) - L.scale(4 * N * omega)
    return LaguerreLevel(N, L, (3 * d + 4 * N) * omega, res)


def es_spectrum(d: Scalar, omega: Scalar, N_max: int) -> list[LaguerreLevel]:
    return [es_laguerre(d, omega, n) for n in range(N_max + 1)]
