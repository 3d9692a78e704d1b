"""The four-body harmonic chain in squared-distance variables.

Builders for the radial Laplacian, the oscillator potential, the Gaussian
ground state, the gauged (polynomial-coefficient) Hamiltonian and its
heavy-particle limits, plus the map between exponent parameters and spring
constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .diffop import DiffOperator, exp_ratio, gauge_conjugate
from .errors import BadLimit, ConfigError, NegativeRoot, NoConvergence, NonNormalizable
from .geometry import MassConfig, cometric_polys
from .poly import NVARS, PAIRS, Polynomial, Scalar, as_fraction, pair_index, rho

GAUGE_NAMES = ("a", "b", "c", "e", "f", "g")  # attached to r12, r13, r14, r23, r24, r34


@dataclass(frozen=True)
class GaugeParams:
    a: Fraction
    b: Fraction
    c: Fraction
    e: Fraction
    f: Fraction
    g: Fraction
    omega: Fraction = Fraction(1)

    def __post_init__(self):
        for name in GAUGE_NAMES + ("omega",):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.omega <= 0:
            raise ConfigError("omega must be positive")

    @classmethod
    def from_values(cls, values: Sequence[Scalar], omega: Scalar = 1) -> "GaugeParams":
        if len(values) != 6:
            raise ConfigError("six gauge parameters are required")
        return cls(*values, omega=omega)

    @classmethod
    def uniform(cls, a: Scalar = 1, omega: Scalar = 1) -> "GaugeParams":
        return cls(a, a, a, a, a, a, omega=omega)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(getattr(self, n) for n in GAUGE_NAMES)

    def replace(self, **kw) -> "GaugeParams":
        d = {n: getattr(self, n) for n in GAUGE_NAMES + ("omega",)}
        d.update(kw)
        return GaugeParams(**d)


@dataclass(frozen=True)
class SpringConstants:
    values: tuple[Fraction, ...]

    def __getitem__(self, pair: tuple[int, int]) -> Fraction:
        return self.values[pair_index(*pair)]

    def as_dict(self) -> dict[str, Fraction]:
        return {f"nu{i}{j}": v for (i, j), v in zip(PAIRS, self.values)}


# ---------------------------------------------------------------- operators

def build_delta_rad(mc: MassConfig, d: Scalar) -> DiffOperator:
    """Radial Laplacian: second-order part from the co-metric plus ``d/mu_ij`` drifts."""
    d = as_fraction(d)
    g = cometric_polys(mc)
    terms: dict[tuple[int, ...], Polynomial] = {}
    for k in range(NVARS):
        for l in range(k, NVARS):
            if g[k][l].is_zero():
                continue
            alpha = [0] * NVARS
            alpha[k] += 1
            alpha[l] += 1
            terms[tuple(alpha)] = g[k][l] if k == l else g[k][l].scale(2)
    for k, (i, j) in enumerate(PAIRS):
        c = d * mc.inv_mu(i, j)
        if c:
            alpha = [0] * NVARS
            alpha[k] = 1
            terms[tuple(alpha)] = Polynomial.const(c)
    return DiffOperator(terms)


def build_es_potential(nu: SpringConstants | Sequence[Scalar], omega: Scalar) -> Polynomial:
    vals = nu.values if isinstance(nu, SpringConstants) else tuple(as_fraction(v) for v in nu)
    omega = as_fraction(omega)
    return Polynomial.linear([2 * omega**2 * v for v in vals])


def _weighted(gauge: Fraction, num: Fraction, inv_mu: Fraction) -> Fraction:
    """``gauge * num * mu`` with ``mu = 1/inv_mu``, allowing ``mu`` infinite when ``gauge = 0``."""
    if gauge == 0:
        return Fraction(0)
    if inv_mu == 0:
        raise BadLimit("a gauge parameter attached to a pair of infinite masses must vanish")
    return gauge * num / inv_mu


def exponent_coefficients(mc: MassConfig, gp: GaugeParams) -> tuple[Fraction, ...]:
    """``s_k = omega * gauge_k * mu_k`` so that the ground state is ``exp(-sum s_k rho_k)``."""
    return tuple(_weighted(gv, gp.omega, mc.inv_mu(i, j)) for gv, (i, j) in zip(gp.values, PAIRS))


def _check_gauge(mc: MassConfig, gp: GaugeParams) -> None:
    for gv, (i, j), name in zip(gp.values, PAIRS, GAUGE_NAMES):
        if mc.inv_mu(i, j) == 0:
            if gv != 0:
                raise BadLimit(f"parameter {name} must be 0 when particles {i} and {j} are both infinitely heavy")
        elif gv <= 0:
            raise NonNormalizable(f"parameter {name} = {gv} gives a non-normalizable ground state")


@dataclass(frozen=True)
class GroundState:
    s: tuple[Fraction, ...]
    energy: Fraction

    @property
    def exponent(self) -> Polynomial:
        return Polynomial.linear([-v for v in self.s])


def ground_state_data(mc: MassConfig, gp: GaugeParams, d: Scalar) -> GroundState:
    _check_gauge(mc, gp)
    d = as_fraction(d)
    return GroundState(exponent_coefficients(mc, gp), gp.omega * d * sum(gp.values))


def _spring_map_raw(mc: MassConfig, gp: GaugeParams, d: Scalar = 3) -> tuple[tuple[Fraction, ...], Fraction]:
    s = exponent_coefficients(mc, gp)
    ratio = exp_ratio(build_delta_rad(mc, d), Polynomial.linear([-v for v in s]))
    if ratio.degree > 1:
        raise AssertionError("Laplacian of a Gaussian in rho must be affine")
    w2 = 2 * gp.omega**2
    nus = tuple(ratio.coefficient(tuple(1 if t == k else 0 for t in range(NVARS))) / w2 for k in range(NVARS))
    return nus, -ratio.constant_term()


def forward_spring_map(mc: MassConfig, gp: GaugeParams) -> SpringConstants:
    """Spring constants for which the Gaussian with these parameters is an eigenfunction.

    Computed by applying the radial Laplacian to the Gaussian: the linear part
    of the ratio is the potential, the constant part is minus the energy.
    """
    return SpringConstants(_spring_map_raw(mc, gp)[0])


def ground_energy_from_map(mc: MassConfig, gp: GaugeParams, d: Scalar) -> Fraction:
    return _spring_map_raw(mc, gp, d)[1]


def transcribed_spring_constants(mc: MassConfig, gp: GaugeParams, fix_nu34: bool = False) -> dict[str, Fraction]:
    """The three relations that are written out in closed form (finite masses only).

    As printed, the last term of ``nu34`` divides by ``m4``; the computed map
    needs ``m2`` there (particle 2 is the one shared by pairs 23 and 24).
    ``fix_nu34`` switches to that corrected divisor.
    """
    mu = lambda i, j: mc.mu(i, j)
    m1, m2, m3, m4 = mc.masses
    a, b, c, e, f, g = gp.values
    nu12 = (a * a * mu(1, 2) + a * b * mu(1, 2) * mu(1, 3) / m1 + a * c * mu(1, 2) * mu(1, 4) / m1
            + a * e * mu(1, 2) * mu(2, 3) / m2 + a * f * mu(1, 2) * mu(2, 4) / m2
            - b * e * mu(1, 3) * mu(2, 3) / m3 - c * f * mu(1, 4) * mu(2, 4) / m4)
    nu13 = (b * b * mu(1, 3) + b * a * mu(1, 3) * mu(1, 2) / m1 + b * c * mu(1, 3) * mu(1, 4) / m1
            + b * e * mu(1, 3) * mu(2, 3) / m3 + b * g * mu(1, 3) * mu(3, 4) / m3
            - a * e * mu(1, 2) * mu(2, 3) / m2 - c * g * mu(1, 4) * mu(3, 4) / m4)
    nu34 = (g * g * mu(3, 4) + g * b * mu(3, 4) * mu(1, 3) / m3 + g * c * mu(3, 4) * mu(1, 4) / m4
            + g * e * mu(3, 4) * mu(2, 3) / m3 + g * f * mu(3, 4) * mu(2, 4) / m4
            - b * c * mu(1, 3) * mu(1, 4) / m1 - e * f * mu(2, 3) * mu(2, 4) / (m2 if fix_nu34 else m4))
    return {"nu12": nu12, "nu13": nu13, "nu34": nu34}


# ---------------------------------------------------------------- inverse map

def spring_quadratic_forms(mc: MassConfig) -> list[list[list[Fraction]]]:
    """Symmetric matrices ``Q_k`` with ``nu_k = g^T Q_k g`` (recovered by polarization)."""
    def nu_at(vec):
        return forward_spring_map(mc, GaugeParams.from_values(vec)).values

    unit = [[Fraction(int(i == j)) for j in range(6)] for i in range(6)]
    diag = [nu_at(unit[i]) for i in range(6)]
    Q = [[[Fraction(0)] * 6 for _ in range(6)] for _ in range(6)]
    for i in range(6):
        for k in range(6):
            Q[k][i][i] = diag[i][k]
        for j in range(i + 1, 6):
            both = nu_at([unit[i][t] + unit[j][t] for t in range(6)])
            for k in range(6):
                Q[k][i][j] = Q[k][j][i] = (both[k] - diag[i][k] - diag[j][k]) / 2
    return Q


@dataclass
class InverseResult:
    gauge: np.ndarray
    residual: float
    iterations: int
    positive: bool = field(default=True)


def inverse_spring_map(mc: MassConfig, nu: SpringConstants | Sequence[Scalar], omega: Scalar = 1,
                       seed: Sequence[float] = (1.0,) * 6, tol: float = 1e-12,
                       max_iter: int = 100) -> InverseResult:
    """Newton solve of the six quadratic equations ``nu(gauge) = nu`` in double precision.

    The Jacobian comes from the exact quadratic forms.  A converged root with
    a non-positive component raises :class:`NegativeRoot`.
    """
    target = np.array([float(v) for v in (nu.values if isinstance(nu, SpringConstants) else nu)])
    Q = np.array([[[float(x) for x in row] for row in q] for q in spring_quadratic_forms(mc)])
    x = np.array(seed, dtype=float)
    if x.shape != (6,):
        raise ValueError("seed must have six entries")

    def residual(v):
        return np.einsum("kij,i,j->k", Q, v, v) - target

    r = residual(x)
    for it in range(1, max_iter + 1):
        jac = 2 * np.einsum("kij,j->ki", Q, x)
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        x = x + step
        r = residual(x)
        norm = float(np.max(np.abs(r)))
        if norm < tol:
            if np.any(x <= 0):
                raise NegativeRoot("Newton converged to a root with non-positive components", root=x, residual=norm)
            return InverseResult(x, norm, it, True)
        if not np.all(np.isfinite(x)):
            break
    raise NoConvergence("Newton iteration did not converge", last_iterate=x,
                        residual=float(np.max(np.abs(r))) if np.all(np.isfinite(r)) else float("inf"))


# ---------------------------------------------------------------- gauged Hamiltonian

# For each derivative direction: entries (gauge name, weighting pair, mass index, (+p, +q, -r)).
_NABLA_TABLE = {
    (1, 2): [("b", (1, 3), 1, ((1, 2), (1, 3), (2, 3))), ("e", (2, 3), 2, ((1, 2), (2, 3), (1, 3))),
             ("c", (1, 4), 1, ((1, 2), (1, 4), (2, 4))), ("f", (2, 4), 2, ((1, 2), (2, 4), (1, 4)))],
    (1, 3): [("a", (1, 2), 1, ((1, 2), (1, 3), (2, 3))), ("c", (1, 4), 1, ((1, 3), (1, 4), (3, 4))),
             ("e", (2, 3), 3, ((2, 3), (1, 3), (1, 2))), ("g", (3, 4), 3, ((3, 4), (1, 3), (1, 4)))],
    (1, 4): [("a", (1, 2), 1, ((1, 4), (1, 2), (2, 4))), ("b", (1, 3), 1, ((1, 4), (1, 3), (3, 4))),
             ("f", (2, 4), 4, ((1, 4), (2, 4), (1, 2))), ("g", (3, 4), 4, ((1, 4), (3, 4), (1, 3)))],
    (2, 3): [("a", (1, 2), 2, ((2, 3), (1, 2), (1, 3))), ("b", (1, 3), 3, ((2, 3), (1, 3), (1, 2))),
             ("f", (2, 4), 2, ((2, 3), (2, 4), (3, 4))), ("g", (3, 4), 3, ((2, 3), (3, 4), (2, 4)))],
    (2, 4): [("a", (1, 2), 2, ((2, 4), (1, 2), (1, 4))), ("c", (1, 4), 4, ((2, 4), (1, 4), (1, 2))),
             ("e", (2, 3), 2, ((2, 4), (2, 3), (3, 4))), ("g", (3, 4), 4, ((2, 4), (3, 4), (2, 3)))],
    (3, 4): [("b", (1, 3), 3, ((3, 4), (1, 3), (1, 4))), ("c", (1, 4), 4, ((3, 4), (1, 4), (1, 3))),
             ("e", (2, 3), 3, ((3, 4), (2, 3), (2, 4))), ("f", (2, 4), 4, ((3, 4), (2, 4), (2, 3)))],
}


def build_nabla_rad(mc: MassConfig, gp: GaugeParams) -> DiffOperator:
    """First-order drift written bracket by bracket (without the factor ``2 omega``)."""
    params = dict(zip(GAUGE_NAMES, gp.values))
    out = DiffOperator.zero()
    for k, pair in enumerate(PAIRS):
        coeff = rho(*pair).scale(2 * params[GAUGE_NAMES[k]])
        for name, wpair, mass_idx, (p, q, r) in _NABLA_TABLE[pair]:
            w = _weighted(params[name], mc.kappa[mass_idx - 1], mc.inv_mu(*wpair))
            if w:
                coeff = coeff + (rho(*p) + rho(*q) - rho(*r)).scale(w)
        out = out + DiffOperator.term(coeff, k)
    return out


def build_h_es(mc: MassConfig, gp: GaugeParams, d: Scalar) -> DiffOperator:
    """Gauged Hamiltonian ``-Lap + 2 omega nabla``; annihilates constants."""
    return -build_delta_rad(mc, d) + build_nabla_rad(mc, gp).scale(2 * gp.omega)


def conjugated_h_es(mc: MassConfig, gp: GaugeParams, d: Scalar) -> DiffOperator:
    """Independent construction: conjugate ``-Lap + V - E0`` by the Gaussian ground state."""
    s = exponent_coefficients(mc, gp)
    nus, e0 = _spring_map_raw(mc, gp, d)
    op = gauge_conjugate(-build_delta_rad(mc, d), Polynomial.linear([-v for v in s]))
    return op + DiffOperator.multiplication(build_es_potential(nus, gp.omega) - Polynomial.const(e0))


# ---------------------------------------------------------------- heavy-particle limits

VARIANTS = ("generic", "equal", "atomic", "molecular", "three-center")

_CLASSICAL = {
    "molecular": (pair_index(1, 2),),
    "three-center": (pair_index(1, 2), pair_index(1, 3), pair_index(2, 3)),
}
_FORCED_ZERO = {"molecular": ("a",), "three-center": ("a", "b", "e")}


@dataclass(frozen=True)
class SpecialModel:
    """A mass configuration family.  ``classical`` freezes pair variables at given values."""

    variant: str
    m: Fraction = Fraction(1)
    masses: MassConfig | None = None
    classical: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "m", as_fraction(self.m))
        if self.variant == "generic" and self.masses is None:
            raise ConfigError("generic variant needs a mass configuration")

    @classmethod
    def with_classical(cls, variant: str, m: Scalar = 1, values: Mapping[int, Scalar] | Sequence[Scalar] = ()):
        keys = _CLASSICAL.get(variant, ())
        if isinstance(values, Mapping):
            vals = {int(k): as_fraction(v) for k, v in values.items()}
        else:
            vals = dict(zip(keys, (as_fraction(v) for v in values)))
        if set(vals) - set(keys):
            raise ConfigError("only the frozen pair variables may be given values")
        return cls(variant, as_fraction(m), None, tuple(sorted(vals.items())))

    @property
    def mass_config(self) -> MassConfig:
        m = self.m
        if self.variant == "generic":
            return self.masses
        return {
            "equal": MassConfig.of(m, m, m, m),
            "atomic": MassConfig.of("inf", m, m, m),
            "molecular": MassConfig.of("inf", "inf", m, m),
            "three-center": MassConfig.of("inf", "inf", "inf", m),
        }[self.variant]

    @property
    def classical_vars(self) -> tuple[int, ...]:
        return _CLASSICAL.get(self.variant, ())

    @property
    def dynamical_vars(self) -> tuple[int, ...]:
        return tuple(k for k in range(NVARS) if k not in self.classical_vars)

    def classical_values(self) -> dict[int, Fraction]:
        return dict(self.classical)


def check_limit_gauge(model: SpecialModel, gp: GaugeParams) -> None:
    for name in _FORCED_ZERO.get(model.variant, ()):
        if getattr(gp, name) != 0:
            raise BadLimit(f"the {model.variant} limit requires {name} = 0")


def build_special(model: SpecialModel, gp: GaugeParams, d: Scalar) -> DiffOperator:
    """Gauged operator of a mass family, in the six-variable ring.

    Frozen pair variables are never differentiated; they remain symbolic in the
    coefficients unless the model carries values for them.
    """
    check_limit_gauge(model, gp)
    op = build_h_es(model.mass_config, gp, d)
    if op.derivative_vars() & set(model.classical_vars):
        raise AssertionError("a frozen variable is differentiated")
    if model.classical:
        op = op.substitute_coefficients(model.classical_values())
    return op


def reduce_to_dynamical(op: DiffOperator, model: SpecialModel) -> DiffOperator:
    """Restrict an operator whose frozen variables have been given values to the dynamical ring."""
    if model.classical_vars and len(model.classical) != len(model.classical_vars):
        raise ConfigError("values for all frozen variables are needed before reduction")
    return op.restrict(model.dynamical_vars)


def special_ground_energy(model: SpecialModel, gp: GaugeParams, d: Scalar) -> Polynomial:
    """Ground energy with the frozen-variable part of the potential moved into the energy.

    The potential is fixed by requiring it to vanish at the origin, so each
    frozen ``rho_k`` contributes ``-2 omega^2 nu_k rho_k`` to the energy.
    Returned as a polynomial in the frozen variables.
    """
    check_limit_gauge(model, gp)
    mc = model.mass_config
    nus, e0 = _spring_map_raw(mc, gp, d)
    energy = Polynomial.const(e0)
    for k in model.classical_vars:
        energy = energy - Polynomial.var(k).scale(2 * gp.omega**2 * nus[k])
    return energy


def special_potential(model: SpecialModel, gp: GaugeParams) -> Polynomial:
    """Potential over the dynamical variables (frozen-variable terms dropped)."""
    check_limit_gauge(model, gp)
    nus, _ = _spring_map_raw(model.mass_config, gp)
    vals = [0 if k in model.classical_vars else v for k, v in enumerate(nus)]
    return build_es_potential(vals, gp.omega)


def closed_form_potential(variant: str, gp: GaugeParams, m: Scalar = 1) -> Polynomial:
    """Potentials of the mass families written out in the gauge parameters."""
    m = as_fraction(m)
    a, b, c, e, f, g = gp.values
    w2 = gp.omega**2
    if variant == "equal":
        coeffs = [2 * a * a + a * (b + c + e + f) - b * e - c * f,
                  2 * b * b + b * (a + c + e + g) - a * e - c * g,
                  2 * c * c + c * (a + b + f + g) - b * g - a * f,
                  2 * e * e + e * (a + b + f + g) - a * b - f * g,
                  2 * f * f + f * (a + c + e + g) - a * c - e * g,
                  2 * g * g + g * (b + c + e + f) - b * c - e * f]
        return Polynomial.linear([m * w2 * v / 2 for v in coeffs])
    if variant == "atomic":
        coeffs = [2 * (2 * a * a + a * (e + f) - e * b - c * f),
                  2 * (2 * b * b + b * (e + g) - a * e - c * g),
                  2 * (2 * c * c + c * (f + g) - a * f - b * g),
                  2 * e * e + e * (2 * a + 2 * b + f + g) - f * g,
                  2 * f * f + f * (2 * a + 2 * c + e + g) - e * g,
                  2 * g * g + g * (2 * b + 2 * c + e + f) - e * f]
        return Polynomial.linear([m * w2 * v / 2 for v in coeffs])
    if variant == "molecular":
        coeffs = [0,
                  2 * b * b + b * (2 * e + g) - c * g,
                  2 * c * c + c * (2 * f + g) - b * g,
                  2 * e * e + e * (2 * b + g) - f * g,
                  2 * f * f + f * (2 * c + g) - e * g,
                  g * (b + c + e + f + g)]
        return Polynomial.linear([m * w2 * v for v in coeffs])
    if variant == "three-center":
        k = 2 * m * (c + f + g) * w2
        return Polynomial.linear([0, 0, k * c, 0, k * f, k * g])
    raise ValueError(f"no closed-form potential for {variant!r}")


def closed_form_ground_energy(variant: str, gp: GaugeParams, d: Scalar, m: Scalar = 1) -> Polynomial:
    d, m = as_fraction(d), as_fraction(m)
    a, b, c, e, f, g = gp.values
    w = gp.omega
    if variant in ("generic", "equal", "atomic"):
        return Polynomial.const(w * d * (a + b + c + e + f + g))
    if variant == "molecular":
        return Polynomial.const(w * d * (b + c + e + f + g)) + rho(1, 2).scale(2 * m * w**2 * (b * e + c * f))
    if variant == "three-center":
        return (Polynomial.const(w * d * (c + f + g))
                + (rho(1, 2).scale(c * f) + rho(1, 3).scale(c * g) + rho(2, 3).scale(f * g)).scale(2 * m * w**2))
    raise ValueError(f"unknown variant {variant!r}")
