"""Geometry of the tetrahedron spanned by four particles, in squared distances.

All quantities are exact.  Infinite masses are encoded by a zero inverse mass
so that heavy-particle limits are exact substitutions rather than large
numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ConfigError, SingularPoint
from .exact import det, poly_det
from .poly import NVARS, PAIRS, Polynomial, Scalar, as_fraction, pair_index, rho

INF = "inf"

# Faces of the tetrahedron as triples of pair indices, labelled by their vertices.
FACES: dict[tuple[int, int, int], tuple[int, int, int]] = {
    (1, 2, 3): (pair_index(1, 2), pair_index(1, 3), pair_index(2, 3)),
    (1, 2, 4): (pair_index(1, 2), pair_index(1, 4), pair_index(2, 4)),
    (1, 3, 4): (pair_index(1, 3), pair_index(1, 4), pair_index(3, 4)),
    (2, 3, 4): (pair_index(2, 3), pair_index(2, 4), pair_index(3, 4)),
}


def _parse_mass(m) -> Fraction:
    """Return the inverse mass; ``"inf"`` maps to 0."""
    if isinstance(m, str) and m.strip().lower() in ("inf", "infinity"):
        return Fraction(0)
    try:
        v = as_fraction(m)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse mass {m!r}") from exc
    if v <= 0:
        raise ConfigError(f"mass must be positive, got {m!r}")
    return 1 / v


@dataclass(frozen=True)
class MassConfig:
    """Four masses stored through their inverses ``kappa_i = 1/m_i`` (0 means infinite)."""

    kappa: tuple[Fraction, Fraction, Fraction, Fraction]

    @classmethod
    def of(cls, *masses) -> "MassConfig":
        if len(masses) == 1 and not isinstance(masses[0], (int, Fraction, str)):
            masses = tuple(masses[0])
        if len(masses) != 4:
            raise ConfigError("exactly four masses are required")
        return cls(tuple(_parse_mass(m) for m in masses))

    @classmethod
    def equal(cls, m: Scalar = 1) -> "MassConfig":
        return cls.of(m, m, m, m)

    def mass(self, i: int) -> Fraction | None:
        """Mass of particle ``i`` (1-based); ``None`` when infinite."""
        k = self.kappa[i - 1]
        return None if k == 0 else 1 / k

    @property
    def masses(self) -> tuple[Fraction | None, ...]:
        return tuple(self.mass(i) for i in range(1, 5))

    @property
    def infinite(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, 5) if self.kappa[i - 1] == 0)

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    def inv_mu(self, i: int, j: int) -> Fraction:
        """``1/mu_ij = 1/m_i + 1/m_j``."""
        return self.kappa[i - 1] + self.kappa[j - 1]

    def mu(self, i: int, j: int) -> Fraction | None:
        s = self.inv_mu(i, j)
        return None if s == 0 else 1 / s

    def _require_finite(self):
        if not self.is_finite:
            raise ValueError("quantity undefined with infinite masses")

    @property
    def total(self) -> Fraction:
        self._require_finite()
        return sum(self.masses)

    @property
    def product(self) -> Fraction:
        self._require_finite()
        p = Fraction(1)
        for m in self.masses:
            p *= m
        return p

    @property
    def c_m(self) -> Fraction:
        return self.total / self.product**2

    def permuted(self, perm: Sequence[int]) -> "MassConfig":
        """Masses relabelled so that new particle ``k`` is old particle ``perm[k]`` (1-based)."""
        return MassConfig(tuple(self.kappa[p - 1] for p in perm))

    def to_strings(self) -> list[str]:
        return [INF if k == 0 else str(1 / k) for k in self.kappa]


# ---------------------------------------------------------------- areas, volume

def heron_s2(a: Scalar, b: Scalar, c: Scalar) -> Fraction:
    """Squared area of a triangle from its squared sides (may be negative off the domain)."""
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    return (2 * (a * b + a * c + b * c) - (a * a + b * b + c * c)) / 16


def heron_poly(p: int, q: int, r: int, nvars: int = NVARS) -> Polynomial:
    a, b, c = (Polynomial.var(k, nvars) for k in (p, q, r))
    return (2 * (a * b + a * c + b * c) - (a * a + b * b + c * c)).scale(Fraction(1, 16))


@lru_cache(maxsize=None)
def v4_squared_poly() -> Polynomial:
    """Squared tetrahedron volume as a cubic in the six squared edges."""
    r12, r13, r14, r23, r24, r34 = (rho(*p) for p in PAIRS)
    inner = (((r13 + r14 + r23 + r24) * r34 - (r13 - r14) * (r23 - r24) - r34 * r34) * r12
             - r13 * r13 * r24 - r34 * r12 * r12
             + r23 * ((r14 - r24) * r34 - r14 * (r14 + r23 - r24))
             + r13 * (r14 * (r23 + r24 - r34) + r24 * (r23 - r24 + r34)))
    return inner.scale(Fraction(1, 144))


def v4_squared(x: Sequence[Scalar]) -> Fraction:
    return v4_squared_poly().eval(x)


def cayley_menger_v4_squared(x: Sequence[Scalar]) -> Fraction:
    """Independent check: bordered 5x5 Cayley-Menger determinant divided by 288."""
    x = [as_fraction(v) for v in x]
    d = [[Fraction(0)] * 4 for _ in range(4)]
    for k, (i, j) in enumerate(PAIRS):
        d[i - 1][j - 1] = d[j - 1][i - 1] = x[k]
    cm = [[Fraction(0)] + [Fraction(1)] * 4]
    for i in range(4):
        cm.append([Fraction(1)] + d[i])
    return det(cm) / 288


def domain_check(x: Sequence[Scalar]) -> str:
    """``interior``, ``boundary`` or ``exterior`` relative to realizable tetrahedra."""
    x = [as_fraction(v) for v in x]
    if any(v < 0 for v in x):
        return "exterior"
    faces = [heron_s2(*(x[k] for k in f)) for f in FACES.values()]
    vol = v4_squared(x)
    if any(s < 0 for s in faces) or vol < 0:
        return "exterior"
    if all(v > 0 for v in x) and all(s > 0 for s in faces) and vol > 0:
        return "interior"
    return "boundary"


# ---------------------------------------------------------------- co-metric

def cometric_polys(mc: MassConfig) -> list[list[Polynomial]]:
    """Symmetric 6x6 matrix of linear polynomials: the principal symbol of the radial Laplacian."""
    g = [[Polynomial.zero() for _ in range(NVARS)] for _ in range(NVARS)]
    for k, (i, j) in enumerate(PAIRS):
        g[k][k] = rho(i, j).scale(2 * mc.inv_mu(i, j))
    # two pairs sharing exactly one particle p couple through 1/m_p
    for k, (i, j) in enumerate(PAIRS):
        for l, (u, v) in enumerate(PAIRS):
            if l <= k:
                continue
            shared = {i, j} & {u, v}
            if len(shared) != 1:
                continue
            p = shared.pop()
            a = i + j - p
            b = u + v - p
            entry = (rho(p, a) + rho(p, b) - rho(a, b)).scale(mc.kappa[p - 1])
            g[k][l] = g[l][k] = entry
    return g


def cometric(mc: MassConfig, x: Sequence[Scalar]) -> list[list[Fraction]]:
    return [[e.eval(x) for e in row] for row in cometric_polys(mc)]


def sum_v2_poly(mc: MassConfig) -> Polynomial:
    """Mass-weighted sum of the squared edges, ``sum m_i m_j rho_ij``."""
    ms = mc.masses
    total = Polynomial.zero()
    for (i, j) in PAIRS:
        total = total + rho(i, j).scale(ms[i - 1] * ms[j - 1])
    return total


def sum_v3_poly(mc: MassConfig) -> Polynomial:
    """Squared face areas, each weighted by the inverse mass of the opposite vertex."""
    total = Polynomial.zero()
    for verts, f in FACES.items():
        opposite = ({1, 2, 3, 4} - set(verts)).pop()
        total = total + heron_poly(*f).scale(mc.kappa[opposite - 1])
    return total


def factorized_det_poly(mc: MassConfig) -> Polynomial:
    v4 = v4_squared_poly()
    bracket = sum_v2_poly(mc) * sum_v3_poly(mc) - v4.scale(9 * mc.total)
    return (v4 * bracket).scale(9216 * mc.c_m)


_DET_CACHE: dict[MassConfig, Polynomial] = {}


def cometric_det_poly(mc: MassConfig) -> Polynomial:
    """Determinant of the co-metric as an exact sextic polynomial."""
    if mc not in _DET_CACHE:
        _DET_CACHE[mc] = poly_det(cometric_polys(mc))
    return _DET_CACHE[mc]


@dataclass(frozen=True)
class DetCheck:
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def det_identity_check(mc: MassConfig, x: Sequence[Scalar]) -> DetCheck:
    lhs = det(cometric(mc, x))
    x = [as_fraction(v) for v in x]
    v4 = v4_squared(x)
    rhs = 9216 * mc.c_m * v4 * (sum_v2_poly(mc).eval(x) * sum_v3_poly(mc).eval(x) - 9 * mc.total * v4)
    return DetCheck(lhs, rhs)


# ---------------------------------------------------------------- effective potential

@dataclass(frozen=True)
class VeffComparison:
    """Effective potential at one point: chain-rule values and candidate closed forms.

    ``oracle`` uses the volume exponent that makes the conjugated operator's
    first-order part agree with the Laplace-Beltrami operator;
    ``oracle_literal`` uses the exponent ``V4^(1 - d/4)`` taken at face value.
    The drift residuals measure that first-order agreement for each choice.
    """

    oracle: Fraction
    oracle_literal: Fraction
    readings: dict[str, Fraction]
    drift_residual: tuple[Fraction, ...]
    drift_residual_literal: tuple[Fraction, ...]

    @property
    def transcribed(self) -> Fraction:
        return self.readings["plain"]

    def matching(self, literal: bool = False) -> list[str]:
        target = self.oracle_literal if literal else self.oracle
        return sorted(k for k, v in self.readings.items() if v == target)


def _veff_closed_form(n2: Fraction, n3: Fraction, d2: Fraction, d3: Fraction,
                      mc: MassConfig, d: Fraction, v4: Fraction, s3: Fraction) -> Fraction:
    M, P = mc.total, mc.product
    first = (3 * n2**2 + 28 * M * P * n3) / (32 * P * (d2 * d3 - 9 * M * v4))
    second = (d - 5) * (d - 3) * s3 / (72 * v4)
    return first + second


def veff_readings(mc: MassConfig, d: Scalar, x: Sequence[Scalar]) -> dict[str, Fraction]:
    """Evaluate the closed-form effective potential under several readings of its sums.

    ``plain`` uses the weighted sums as they are; ``squared_terms`` squares
    every summand; ``squared_sums`` squares each sum.  Only the numerator and
    denominator slots that carry the ambiguous notation change.
    """
    d = as_fraction(d)
    x = [as_fraction(v) for v in x]
    v4 = v4_squared(x)
    s2 = sum_v2_poly(mc).eval(x)
    s3 = sum_v3_poly(mc).eval(x)
    ms = mc.masses
    s2_sq_terms = sum(((ms[i - 1] * ms[j - 1] * x[k]) ** 2 for k, (i, j) in enumerate(PAIRS)), Fraction(0))
    s3_sq_terms = Fraction(0)
    for verts, f in FACES.items():
        opposite = ({1, 2, 3, 4} - set(verts)).pop()
        s3_sq_terms += (mc.kappa[opposite - 1] * heron_s2(*(x[k] for k in f))) ** 2
    out = {}
    out["plain"] = _veff_closed_form(s2, s3, s2, s3, mc, d, v4, s3)
    out["squared_terms"] = _veff_closed_form(s2_sq_terms, s3_sq_terms, s2_sq_terms, s3_sq_terms, mc, d, v4, s3_sq_terms)
    out["squared_sums"] = _veff_closed_form(s2**2, s3**2, s2**2, s3**2, mc, d, v4, s3**2)
    return out


def volume_exponent(d: Scalar, literal: bool = False) -> Fraction:
    """Power of ``V4^2`` in the gauge factor."""
    d = as_fraction(d)
    return Fraction(1, 2) - d / 8 if literal else 1 - d / 4


def drift_residual(mc: MassConfig, d: Scalar, x: Sequence[Scalar], v4_power: Fraction) -> tuple[Fraction, ...]:
    """First-order mismatch between the conjugated Laplacian and the Laplace-Beltrami operator.

    With ``Gamma = D^(-1/4) (V4^2)^p`` the conjugated drift is
    ``b^nu + 2 g^{mu nu} d_mu log Gamma``; the Laplace-Beltrami drift is
    ``d_mu g^{mu nu} - g^{mu nu} d_mu log D / 2``.
    """
    from .oscillator import build_delta_rad

    d = as_fraction(d)
    x = [as_fraction(v) for v in x]
    gp = cometric_polys(mc)
    g = [[e.eval(x) for e in row] for row in gp]
    dm = cometric_det_poly(mc)
    v4p = v4_squared_poly()
    dval, vval = dm.eval(x), v4p.eval(x)
    log_d = [dm.diff(k).eval(x) / dval for k in range(NVARS)]
    log_v = [v4p.diff(k).eval(x) / vval for k in range(NVARS)]
    lap = build_delta_rad(mc, d)
    out = []
    for nu in range(NVARS):
        e = tuple(1 if t == nu else 0 for t in range(NVARS))
        b = lap.coefficient(e).eval(x)
        lg = sum(g[mu][nu] * (-log_d[mu] / 4 + v4_power * log_v[mu]) for mu in range(NVARS))
        lb = sum(gp[mu][nu].diff(mu).eval(x) for mu in range(NVARS)) - sum(g[mu][nu] * log_d[mu] for mu in range(NVARS)) / 2
        out.append(b + 2 * lg - lb)
    return tuple(out)


def gauge_factor_and_veff(mc: MassConfig, d: Scalar, x: Sequence[Scalar]) -> VeffComparison:
    """Effective potential ``-[Lap Gamma]/Gamma`` by the exact chain rule, next to its closed forms.

    ``Gamma = D^(-1/4) (V4^2)^p`` with ``D`` the co-metric determinant.
    """
    from .diffop import apply_to_power_product
    from .oscillator import build_delta_rad

    if not mc.is_finite:
        raise ValueError("the generic effective potential needs finite masses")
    d = as_fraction(d)
    x = [as_fraction(v) for v in x]
    v4p = v4_squared_poly()
    dm = cometric_det_poly(mc)
    if v4p.eval(x) <= 0 or dm.eval(x) <= 0:
        raise SingularPoint("effective potential requested outside the open domain")
    lap = build_delta_rad(mc, d)
    values = {}
    for literal in (False, True):
        p = volume_exponent(d, literal)
        values[literal] = -apply_to_power_product(lap, [(dm, Fraction(-1, 4)), (v4p, p)], x)
    return VeffComparison(
        oracle=values[False],
        oracle_literal=values[True],
        readings=veff_readings(mc, d, x),
        drift_residual=drift_residual(mc, d, x, volume_exponent(d)),
        drift_residual_literal=drift_residual(mc, d, x, volume_exponent(d, True)),
    )


def radial_measure(d: Scalar, x: Sequence[Scalar]):
    """Density ``V4^(d-4)``: a Fraction when the power of ``V4^2`` is integral, else ``(V4^2, exponent)``."""
    d = as_fraction(d)
    v4 = v4_squared(x)
    if v4 <= 0:
        raise SingularPoint("measure requested outside the open domain")
    e = (d - 4) / 2
    if e.denominator == 1:
        return v4 ** int(e)
    return (v4, e)


# ---------------------------------------------------------------- heavy-particle limits

def atomic_cometric_polys(m: Scalar) -> list[list[Polynomial]]:
    """Displayed co-metric for one infinite and three equal masses ``m``."""
    m = as_fraction(m)
    r12, r13, r14, r23, r24, r34 = (rho(*p) for p in PAIRS)
    z = Polynomial.zero()
    rows = [
        [2 * r12, z, z, r12 - r13 + r23, r12 - r14 + r24, z],
        [z, 2 * r13, z, r13 + r23 - r12, z, r13 - r14 + r34],
        [z, z, 2 * r14, z, r14 + r24 - r12, r14 + r34 - r13],
        [r12 - r13 + r23, r13 + r23 - r12, z, 4 * r23, r23 + r24 - r34, r23 - r24 + r34],
        [r12 - r14 + r24, z, r14 + r24 - r12, r23 + r24 - r34, 4 * r24, r24 + r34 - r23],
        [z, r13 - r14 + r34, r14 + r34 - r13, r23 - r24 + r34, r24 + r34 - r23, 4 * r34],
    ]
    return [[e.scale(1 / m) for e in row] for row in rows]


def molecular_cometric_polys(m: Scalar) -> list[list[Polynomial]]:
    """Displayed 5x5 co-metric over ``r13, r14, r23, r24, r34`` (``r12`` frozen)."""
    m = as_fraction(m)
    r12, r13, r14, r23, r24, r34 = (rho(*p) for p in PAIRS)
    z = Polynomial.zero()
    rows = [
        [2 * r13, z, r13 + r23 - r12, z, r13 - r14 + r34],
        [z, 2 * r14, z, r14 + r24 - r12, r14 + r34 - r13],
        [r13 + r23 - r12, z, 2 * r23, z, r23 - r24 + r34],
        [z, r14 + r24 - r12, z, 2 * r24, r24 + r34 - r23],
        [r13 - r14 + r34, r14 + r34 - r13, r23 - r24 + r34, r24 + r34 - r23, 4 * r34],
    ]
    return [[e.scale(1 / m) for e in row] for row in rows]


def three_center_cometric_polys(m: Scalar) -> list[list[Polynomial]]:
    """Displayed 3x3 co-metric over ``r14, r24, r34``."""
    m = as_fraction(m)
    r12, r13, r14, r23, r24, r34 = (rho(*p) for p in PAIRS)
    rows = [
        [2 * r14, r14 + r24 - r12, r14 + r34 - r13],
        [r14 + r24 - r12, 2 * r24, r24 + r34 - r23],
        [r14 + r34 - r13, r24 + r34 - r23, 2 * r34],
    ]
    return [[e.scale(1 / m) for e in row] for row in rows]


def molecular_g2(x: Sequence[Scalar]) -> Fraction:
    r12, r13, r14, r23, r24, r34 = (as_fraction(v) for v in x)
    return 2 * r12 * (r13 + r14 + r23 + r24 - r12) - (r13 - r23) ** 2 - (r14 - r24) ** 2


VARIANT_COMETRICS = {
    "atomic": atomic_cometric_polys,
    "molecular": molecular_cometric_polys,
    "three-center": three_center_cometric_polys,
}


def special_determinants(variant: str, x: Sequence[Scalar], m: Scalar = 1) -> Fraction:
    """Closed-form determinant of the reduced co-metric for a heavy-particle limit."""
    m = as_fraction(m)
    x = [as_fraction(v) for v in x]
    v4 = v4_squared(x)
    if variant == "atomic":
        s = sum(heron_s2(*(x[k] for k in FACES[f])) for f in ((1, 3, 4), (1, 2, 4), (1, 2, 3)))
        return 9216 / m**6 * v4 * ((x[0] + x[1] + x[2]) * s - 9 * v4)
    if variant == "molecular":
        return 288 / m**5 * v4 * molecular_g2(x)
    if variant == "three-center":
        return 288 / m**3 * v4
    raise ValueError(f"unknown variant {variant!r}")


def special_determinant_direct(variant: str, x: Sequence[Scalar], m: Scalar = 1) -> Fraction:
    rows = VARIANT_COMETRICS[variant](m)
    return det([[e.eval(x) for e in row] for row in rows])
