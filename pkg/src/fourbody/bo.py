"""Born-Oppenheimer treatment of the two-center molecular oscillator.

Two heavy nuclei (masses ``m1, m2``) and two light particles of mass ``m``.
The electronic energy is a harmonic potential in ``rho = rho12``; the
nuclear problem is then a radial oscillator whose zero-point energy is
compared with the exact ground energy ``omega d (a+b+c+e+f+g)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .diffop import DiffOperator
from .errors import NoFit
from .geometry import MassConfig
from .jacobi import radial_oracle
from .oscillator import GaugeParams, forward_spring_map
from .poly import Polynomial, Scalar, as_fraction


@dataclass(frozen=True)
class BOParams:
    m1: Fraction
    m2: Fraction
    m: Fraction
    b: Fraction
    c: Fraction
    e: Fraction
    f: Fraction
    g: Fraction
    omega: Fraction
    d: Fraction
    nu12: Fraction = Fraction(0)
    L: int = 0

    def __post_init__(self):
        for name in ("m1", "m2", "m", "b", "c", "e", "f", "g", "omega", "d", "nu12"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.m1 <= 0 or self.m2 <= 0:
            raise ValueError("nuclear masses must be positive")
        if self.m < 0 or self.omega <= 0:
            raise ValueError("need m >= 0 and omega > 0")
        if self.L < 0:
            raise ValueError("L must be non-negative")

    @property
    def mu(self) -> Fraction:
        return self.m1 * self.m2 / (self.m1 + self.m2)

    @property
    def spring(self) -> Fraction:
        """Coefficient ``K`` of ``2 omega^2 K rho`` in the nuclear potential."""
        return self.m * (self.b * self.e + self.c * self.f) + self.nu12

    @classmethod
    def from_gauge(cls, gp: GaugeParams, m: Scalar, d: Scalar, m1: Scalar = 1, m2: Scalar = 1) -> "BOParams":
        """Take ``nu12`` from the forward spring map at masses ``(m1, m2, m, m)``."""
        m = as_fraction(m)
        nu12 = forward_spring_map(MassConfig.of(m1, m2, m, m), gp)[(1, 2)] if m > 0 else Fraction(0)
        return cls(m1, m2, m, gp.b, gp.c, gp.e, gp.f, gp.g, gp.omega, d, nu12)


@dataclass(frozen=True)
class NuclearHamiltonian:
    """``kinetic + centrifugal / rho + potential`` in the single variable ``rho``."""

    kinetic: DiffOperator
    centrifugal: Fraction
    potential: Polynomial


def nuclear_hamiltonian(p: BOParams, electronic_energy: Scalar = 0) -> NuclearHamiltonian:
    rho = Polynomial.var(0, 1)
    kin = (DiffOperator.term(rho.scale(2), 0, 0) + DiffOperator.term(Polynomial.const(p.d, 1), 0)).scale(-1 / p.mu)
    const = p.omega * p.d * (p.b + p.c + p.e + p.f + p.g) + as_fraction(electronic_energy)
    pot = rho.scale(2 * p.omega**2 * p.spring) + const
    return NuclearHamiltonian(kin, Fraction(p.L * (p.L + p.d - 2)), pot)


def _sqrt_term_excess(p: BOParams, a: Fraction) -> float:
    """``sqrt(K/mu) - a`` without cancellation: ``(K/mu - a^2) / (sqrt(K/mu) + a)``."""
    x = p.spring / p.mu
    if x < 0:
        raise ValueError("nuclear potential is not confining")
    root = math.sqrt(x)
    return float(x - a * a) / (root + float(a)) if root + float(a) > 0 else 0.0


def nuclear_ground_energy(p: BOParams) -> float:
    """Zero-point energy of the ``L = 0`` nuclear oscillator."""
    if p.L != 0:
        raise NotImplementedError("only the L = 0 branch is evaluated")
    if p.b * p.e + p.c * p.f <= 0:
        raise ValueError("need be + cf > 0")
    base = p.omega * p.d * (p.b + p.c + p.e + p.f + p.g)
    return float(base) + float(p.omega * p.d) * math.sqrt(float(p.spring / p.mu))


def nuclear_ground_energy_oracle(p: BOParams) -> float:
    """Same level from a finite-difference solve of the radial problem in ``r``.

    In ``r = sqrt(rho)`` the kinetic term is ``-(1/2mu)`` times the radial
    Laplacian, so ``2 mu (H - const)`` is ``-Delta + 4 mu omega^2 K r^2``.
    """
    freq = math.sqrt(float(4 * p.mu * p.omega**2 * p.spring))
    lowest = float(radial_oracle(freq, p.d, 1)[0])
    return float(p.omega * p.d * (p.b + p.c + p.e + p.f + p.g)) + lowest / float(2 * p.mu)


def exact_ground_energy(gp: GaugeParams, d: Scalar) -> Fraction:
    return gp.omega * as_fraction(d) * sum(gp.values)


def bo_gap(gp: GaugeParams, d: Scalar, m: Scalar) -> float:
    """``E0^(nucl) - E0`` at ``m1 = m2 = 1``; the limit value 0 at ``m = 0``."""
    m = as_fraction(m)
    if m == 0:
        return 0.0
    p = BOParams.from_gauge(gp, m, d)
    return float(gp.omega * p.d) * _sqrt_term_excess(p, gp.a)


def displayed_expansion(gp: GaugeParams, d: Scalar) -> tuple[Fraction, Fraction]:
    """Coefficients of ``m`` and ``m^2`` in the small-``m`` expansion of the gap."""
    d = as_fraction(d)
    s = gp.b + gp.c + gp.e + gp.f
    q = gp.b * gp.e + gp.c * gp.f
    pref = gp.omega * d / 2
    return pref * s, -pref * (4 * (gp.a * s - 4 * q) + s * s) / (4 * gp.a)


@dataclass(frozen=True)
class GapExpansion:
    m_values: tuple[float, ...]
    gaps: tuple[float, ...]
    leading: float
    second: float
    leading_expected: Fraction
    second_expected: Fraction
    ratio: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def leading_rel_error(self) -> float:
        return abs(self.leading - float(self.leading_expected)) / abs(float(self.leading_expected))

    @property
    def second_rel_error(self) -> float:
        exp = float(self.second_expected)
        return abs(self.second - exp) / abs(exp) if exp else abs(self.second)

    def ok(self, leading_tol: float = 0.01, second_tol: float = 0.05) -> bool:
        return self.leading_rel_error <= leading_tol and self.second_rel_error <= second_tol


def bo_gap_expansion_check(gp: GaugeParams, d: Scalar, m_values: Sequence[Scalar] = (Fraction(1, 1000), Fraction(1, 10000))
                           ) -> GapExpansion:
    """Richardson estimate of the gap's Taylor coefficients in ``m``.

    ``gap/m`` is linear in ``m`` up to ``O(m^2)``; two values give the
    intercept and slope.  With more values the fit uses the two smallest and
    the rest must approach the intercept monotonically.
    """
    if gp.a <= 0:
        raise ValueError("the expansion needs a > 0")
    ms = sorted((as_fraction(v) for v in m_values), reverse=True)
    if len(ms) < 2 or ms[-1] <= 0:
        raise ValueError("need at least two positive m values")
    gaps = [bo_gap(gp, d, m) for m in ms]
    slopes = [g / float(m) for g, m in zip(gaps, ms)]
    m_a, m_b = float(ms[-2]), float(ms[-1])
    s_a, s_b = slopes[-2], slopes[-1]
    c1 = (m_a * s_b - m_b * s_a) / (m_a - m_b)
    c2 = (s_a - s_b) / (m_a - m_b)
    residuals = [abs(s - c1) for s in slopes]
    if any(r_next > r_prev for r_prev, r_next in zip(residuals, residuals[1:])):
        raise NoFit(f"gap/m does not approach its intercept monotonically: {residuals}")
    lead, second = displayed_expansion(gp, d)
    ratio = gaps[-2] / gaps[-1] if gaps[-1] else None
    return GapExpansion(tuple(float(m) for m in ms), tuple(gaps), c1, c2, lead, second, ratio)
