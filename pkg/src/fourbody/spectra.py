"""Spectra of flag-preserving operators from the diagonal blocks of their graded matrices."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .diffop import DiffOperator, OperatorMatrix, matrix_on_basis
from .errors import IdentityFailure
from .exact import charpoly, is_lower_triangular, is_upper_triangular, poly_mul_coeffs
from .oscillator import (GaugeParams, SpecialModel, build_h_es, build_special,
                         check_limit_gauge, reduce_to_dynamical, special_ground_energy)
from .poly import Scalar, as_fraction, monomials_of_degree

FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumLevel:
    quantum_numbers: tuple[int, ...]
    energy: Fraction | float
    multiplicity: int


@dataclass(frozen=True)
class FundamentalFrequencies:
    """Eigenvalues of the degree-1 block; exact when that block is triangular."""

    values: tuple[Fraction | float, ...]
    exact: bool
    residual: float = 0.0

    def combination(self, n: Sequence[int]) -> Fraction | float:
        return sum((k * lam for k, lam in zip(n, self.values)), Fraction(0) if self.exact else 0.0)


def _triangular(block) -> bool:
    return is_upper_triangular(block) or is_lower_triangular(block)


def _float_eigen(block) -> tuple[np.ndarray, float]:
    a = np.array([[float(x) for x in row] for row in block])
    vals, vecs = np.linalg.eig(a)
    scale = max(1.0, float(np.abs(a).max()))
    res = max((float(np.linalg.norm(a @ vecs[:, k] - vals[k] * vecs[:, k])) for k in range(len(vals))), default=0.0)
    return vals, res / scale


def block_eigenvalues(block) -> tuple[list[Fraction | float], bool, float]:
    """Eigenvalues of one degree block: ``(values, exact, relative residual)``."""
    if _triangular(block):
        return [block[k][k] for k in range(len(block))], True, 0.0
    vals, res = _float_eigen(block)
    if np.abs(vals.imag).max() > FLOAT_TOL:
        raise IdentityFailure(f"complex eigenvalues in a degree block: {vals}")
    return sorted(vals.real.tolist()), False, res


def fundamental_frequencies(h: DiffOperator) -> FundamentalFrequencies:
    """Eigenvalues of the 6x6 (or smaller) degree-1 block of ``h``."""
    block = matrix_on_basis(h, 1).block(1)
    vals, exact, res = block_eigenvalues(block)
    if not exact and res > 1e-10:
        raise IdentityFailure(f"eigen-solve residual {res:.2e} too large")
    return FundamentalFrequencies(tuple(vals), exact, res)


@dataclass(frozen=True)
class SpectrumTable:
    levels: tuple[SpectrumLevel, ...]
    frequencies: FundamentalFrequencies
    linear: bool
    max_deviation: float
    charpoly_ok: bool | None
    block_triangular: bool

    @property
    def energies(self) -> list[Fraction | float]:
        return [lvl.energy for lvl in self.levels]

    def multiplicities(self) -> dict:
        return dict(Counter(self.energies))


def _charpoly_cross_check(mat: OperatorMatrix) -> bool:
    whole = charpoly(mat.entries)
    prod = [Fraction(1)]
    for n, _ in mat.degree_slices():
        prod = poly_mul_coeffs(prod, charpoly(mat.block(n)))
    return whole == prod


def spectrum(h: DiffOperator, N: int, charpoly_check: bool | None = None) -> SpectrumTable:
    """All eigenvalues of ``h`` on the degree-``N`` polynomial space.

    Each degree block is solved on its own.  The eigenvalues are then matched
    against the combinations ``sum n_i lambda_i`` of the fundamental
    frequencies; ``linear`` and ``max_deviation`` report how well that works.
    Rows carry the quantum numbers of the matched combination, and the
    multiplicity of their energy.
    """
    mat = matrix_on_basis(h, N)
    freqs = fundamental_frequencies(h) if N >= 1 else FundamentalFrequencies((), True)
    nv = h.nvars
    rows: list[tuple[tuple[int, ...], Fraction | float]] = []
    linear, worst = True, 0.0
    for n, _ in mat.degree_slices():
        block = mat.block(n)
        vals, exact, _ = block_eigenvalues(block)
        labels = monomials_of_degree(n, nv)
        predicted = [(lab, freqs.combination(lab) if n else Fraction(0)) for lab in labels]
        if exact and (freqs.exact or n == 0):
            if Counter(vals) != Counter(p for _, p in predicted):
                linear = False
            rows.extend(predicted if linear else [((), v) for v in vals])
            continue
        pred_sorted = sorted(predicted, key=lambda t: float(t[1]))
        got = sorted(float(v) for v in vals)
        dev = max((abs(float(p) - g) for (_, p), g in zip(pred_sorted, got)), default=0.0)
        worst = max(worst, dev)
        if dev > FLOAT_TOL * max(1.0, max((abs(g) for g in got), default=1.0)):
            linear = False
        rows.extend((lab, g) for (lab, _), g in zip(pred_sorted, got))
    counts = Counter(e for _, e in rows)
    levels = tuple(SpectrumLevel(q, e, counts[e]) for q, e in rows)
    if charpoly_check is None:
        charpoly_check = N <= 2
    cp = _charpoly_cross_check(mat) if charpoly_check else None
    return SpectrumTable(levels, freqs, linear, worst, cp, mat.is_block_triangular())


# ---------------------------------------------------------------- mass families

def special_operator(model: SpecialModel, gp: GaugeParams, d: Scalar) -> DiffOperator:
    """Operator over the dynamical variables only; frozen variables must carry values."""
    op = build_special(model, gp, d)
    return reduce_to_dynamical(op, model) if model.classical_vars else op


def closed_form_special_spectra(variant: str, gp: GaugeParams, d: Scalar, quantum_numbers: Sequence[int],
                                m: Scalar = 1, classical: Mapping[int, Scalar] | Sequence[Scalar] = ()
                                ) -> Fraction | float:
    """Energy of one level of a mass family.

    ``equal`` uses ``8 a omega sum N_i`` and needs equal gauge parameters; the
    others add ``sum k_i lambda_i`` (frequencies of the reduced operator) to
    the ground energy, which for two- and three-center models depends on the
    frozen distances (zero by default).
    """
    d = as_fraction(d)
    q = tuple(int(k) for k in quantum_numbers)
    if any(k < 0 for k in q):
        raise ValueError("quantum numbers are non-negative")
    if variant == "equal":
        if len(set(gp.values)) != 1:
            raise ValueError("the closed equal-mass formula needs equal gauge parameters")
        if len(q) != 6:
            raise ValueError("six quantum numbers expected")
        return 8 * gp.a * gp.omega * sum(q)
    if variant not in ("atomic", "molecular", "three-center"):
        raise ValueError(f"no closed-form spectrum for {variant!r}")
    frozen = SpecialModel(variant, m).classical_vars
    model = SpecialModel.with_classical(variant, m, classical or [0] * len(frozen))
    check_limit_gauge(model, gp)
    op = special_operator(model, gp, d)
    freqs = fundamental_frequencies(op)
    if len(q) != len(freqs.values):
        raise ValueError(f"{len(freqs.values)} quantum numbers expected for {variant}")
    e0 = special_ground_energy(model, gp, d).eval([model.classical_values().get(k, 0) for k in range(6)])
    return e0 + freqs.combination(q)

