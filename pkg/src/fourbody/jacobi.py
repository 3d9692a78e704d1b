"""Jacobi coordinates of four particles and the separable Jacobi oscillator.

Square roots live only here.  Identities that are claimed exact are checked
on squared quantities, which stay rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .poly import Scalar, as_fraction


@dataclass(frozen=True)
class ParticleSystem:
    masses: tuple[Fraction, ...]
    positions: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        masses = tuple(as_fraction(m) for m in self.masses)
        positions = tuple(tuple(as_fraction(x) for x in p) for p in self.positions)
        if len(masses) != 4 or len(positions) != 4:
            raise ValueError("four particles expected")
        if any(m <= 0 for m in masses):
            raise ValueError("masses must be positive")
        if len({len(p) for p in positions}) != 1:
            raise ValueError("all positions need the same dimension")
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "positions", positions)

    @property
    def dim(self) -> int:
        return len(self.positions[0])


def _partial_sums(masses: Sequence[Fraction]) -> list[Fraction]:
    out, acc = [], Fraction(0)
    for m in masses:
        acc += m
        out.append(acc)
    return out


def squared_jacobi_matrix(masses: Sequence[Scalar]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Rows of the coordinate map with their square-root prefactors split off.

    Returns ``(s, B)`` with the true matrix ``A[j][k] = sqrt(s[j]) * B[j][k]``.
    Row 0 is the center of mass, rows 1..3 the Jacobi vectors.
    """
    m = [as_fraction(x) for x in masses]
    Ms = _partial_sums(m)
    s = [1 / Ms[3]]
    B = [list(m)]
    for j in range(1, 4):
        s.append(m[j] * Ms[j - 1] / Ms[j])
        B.append([-m[k] / Ms[j - 1] if k < j else (Fraction(1) if k == j else Fraction(0)) for k in range(4)])
    return s, B


def jacobi_matrix(masses: Sequence[Scalar]) -> np.ndarray:
    s, B = squared_jacobi_matrix(masses)
    return np.array([[math.sqrt(s[j]) * float(B[j][k]) for k in range(4)] for j in range(4)])


def jacobi_vectors(ps: ParticleSystem) -> tuple[np.ndarray, np.ndarray]:
    """``(R0, rJ)`` with ``rJ`` of shape ``(3, d)``."""
    A = jacobi_matrix(ps.masses)
    X = np.array([[float(x) for x in p] for p in ps.positions])
    Q = A @ X
    return Q[0], Q[1:]


@dataclass(frozen=True)
class KineticCheck:
    diagonal: tuple[Fraction, ...]      # exact diagonal of A diag(1/m) A^T
    max_off_diagonal: float
    quadratic_form_error: float | None = None

    @property
    def ok(self) -> bool:
        return all(x == 1 for x in self.diagonal) and self.max_off_diagonal < 1e-12


def kinetic_diagonalization_check(masses: Sequence[Scalar], positions: Sequence[Sequence[Scalar]] | None = None
                                  ) -> KineticCheck:
    """``A diag(1/m) A^T = I``: diagonal exactly, off-diagonal in floats.

    With positions, also compares ``sum m_i |r_i|^2`` against
    ``|R0|^2 + sum_j |rJ_j|^2``.
    """
    m = [as_fraction(x) for x in masses]
    s, B = squared_jacobi_matrix(m)
    diag = tuple(s[j] * sum(B[j][k] ** 2 / m[k] for k in range(4)) for j in range(4))
    A = jacobi_matrix(m)
    G = A @ np.diag([1 / float(x) for x in m]) @ A.T
    off = float(np.abs(G - np.diag(np.diag(G))).max())
    qf = None
    if positions is not None:
        ps = ParticleSystem(tuple(m), tuple(tuple(p) for p in positions))
        R0, rJ = jacobi_vectors(ps)
        X = np.array([[float(x) for x in p] for p in ps.positions])
        lhs = float(sum(float(mk) * X[k] @ X[k] for k, mk in enumerate(m)))
        rhs = float(R0 @ R0 + (rJ * rJ).sum())
        qf = abs(lhs - rhs) / max(1.0, abs(lhs))
    return KineticCheck(diag, off, qf)


def moment_of_inertia_coefficients(masses: Sequence[Scalar]) -> np.ndarray:
    """Matrix of ``sum m_i r_i^2`` in the coordinates ``(R0, rJ1, rJ2, rJ3)``."""
    m = np.array([float(as_fraction(x)) for x in masses])
    Ainv = np.linalg.inv(jacobi_matrix(masses))
    return Ainv.T @ np.diag(m) @ Ainv


def reduced_mass_mu(masses: Sequence[Scalar]) -> float:
    m = [float(as_fraction(x)) for x in masses]
    return (m[0] * m[1] * m[2] * m[3] / sum(m)) ** (1 / 3)


def jacobi_spectrum(A: Sequence[Scalar], omega: Scalar, d: Scalar, n: Sequence[int]) -> float:
    """S-state level of three radial oscillators: ``omega sum sqrt(A_i) (4 n_i + d)``."""
    if len(A) != 3 or len(n) != 3:
        raise ValueError("three spring constants and three quantum numbers expected")
    if any(as_fraction(a) <= 0 for a in A):
        raise ValueError("spring constants must be positive")
    if any(k < 0 for k in n):
        raise ValueError("quantum numbers are non-negative")
    w, dd = float(as_fraction(omega)), float(as_fraction(d))
    return sum(w * math.sqrt(float(as_fraction(a))) * (4 * k + dd) for a, k in zip(A, n))


def _radial_levels(freq: float, d: float, count: int, cells: int) -> np.ndarray:
    # finite volumes on cell centres with weight r^(d-1); the face at r=0 carries no flux
    R = math.sqrt(2 * 14 * math.log(10) / freq) + 1.0
    h = R / cells
    r = (np.arange(cells) + 0.5) * h
    w = r ** (d - 1)
    faces = (np.arange(cells + 1) * h) ** (d - 1)
    faces[0] = 0.0
    diag = (faces[:-1] + faces[1:]) / (h * h * w) + freq * freq * r * r
    off = -faces[1:-1] / (h * h * np.sqrt(w[:-1] * w[1:]))
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1), eigvals_only=True)


def radial_oracle(freq: float, d: Scalar, count: int, cells: int = 4000) -> np.ndarray:
    """Lowest levels of ``-u'' - (d-1)/r u' + freq^2 r^2 u`` by finite differences.

    Two grids are combined by Richardson extrapolation.
    """
    d = float(as_fraction(d))
    coarse = _radial_levels(freq, d, count, cells)
    fine = _radial_levels(freq, d, count, 2 * cells)
    return (4 * fine - coarse) / 3


def jacobi_spectrum_oracle(A: Sequence[Scalar], omega: Scalar, d: Scalar, n: Sequence[int]) -> float:
    w = float(as_fraction(omega))
    total = 0.0
    for a, k in zip(A, n):
        freq = math.sqrt(float(as_fraction(a))) * w
        total += float(radial_oracle(freq, d, k + 1)[k])
    return total
