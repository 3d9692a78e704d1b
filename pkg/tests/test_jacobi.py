import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from fourbody.jacobi import (ParticleSystem, jacobi_spectrum, jacobi_spectrum_oracle, jacobi_vectors,
                             kinetic_diagonalization_check, moment_of_inertia_coefficients, radial_oracle)


def test_first_jacobi_vector():
    ps = ParticleSystem((1, 1, 2, 3), ((0, 0, 0), (5, 0, 0), (1, 2, 3), (0, 1, 0)))
    _, rJ = jacobi_vectors(ps)
    assert np.allclose(rJ[0], [5 / math.sqrt(2), 0, 0])


def test_first_vector_is_relative_12():
    rnd = random.Random(1)
    for _ in range(5):
        masses = [F(rnd.randint(1, 9)) for _ in range(4)]
        pos = [[F(rnd.randint(-5, 5)) for _ in range(3)] for _ in range(4)]
        _, rJ = jacobi_vectors(ParticleSystem(masses, pos))
        rel = np.array([float(a - b) for a, b in zip(pos[1], pos[0])])
        assert np.allclose(np.cross(rJ[0], rel), 0)


def test_translation():
    masses = (1, 2, 3, 4)
    pos = [[1, 2], [3, -1], [0, 0], [2, 5]]
    t = [F(3, 2), -2]
    R0, rJ = jacobi_vectors(ParticleSystem(masses, pos))
    R0t, rJt = jacobi_vectors(ParticleSystem(masses, [[p[0] + t[0], p[1] + t[1]] for p in pos]))
    assert np.allclose(rJ, rJt, atol=1e-12)
    assert np.allclose(R0t - R0, math.sqrt(10) * np.array([1.5, -2.0]))


def test_kinetic_identity():
    chk = kinetic_diagonalization_check((1, 1, 1, 1))
    assert chk.diagonal == (1, 1, 1, 1) and chk.ok
    chk = kinetic_diagonalization_check((1, 2, 3, 4), [[1, 0, 2], [0, 3, 1], [F(1, 2), 1, 1], [2, 2, -1]])
    assert chk.ok and chk.max_off_diagonal < 1e-12 and chk.quadratic_form_error < 1e-12


def test_moment_of_inertia_is_identity():
    assert np.allclose(moment_of_inertia_coefficients((1, 2, 3, 4)), np.eye(4), atol=1e-12)


def test_spectrum_examples():
    assert jacobi_spectrum((1, 1, 1), 1, 3, (0, 0, 0)) == 9
    assert jacobi_spectrum((1, 4, 9), 1, 1, (0, 0, 0)) == 6
    assert jacobi_spectrum((1, 4, 9), 1, 3, (0, 1, 0)) - jacobi_spectrum((1, 4, 9), 1, 3, (0, 0, 0)) == 8
    with pytest.raises(ValueError):
        jacobi_spectrum((1, 0, 1), 1, 3, (0, 0, 0))


@pytest.mark.parametrize("d", [1, 2, 3, F(7, 2)])
def test_radial_oracle_levels(d):
    levels = radial_oracle(2.0, d, 3)
    exact = [2.0 * (4 * n + float(d)) for n in range(3)]
    assert np.allclose(levels, exact, atol=1e-6)


def test_spectrum_oracle():
    for A, n, d in (((1, 4, 9), (0, 1, 2), 3), ((F(5, 2), 2, 3), (1, 0, 0), F(7, 2))):
        assert abs(jacobi_spectrum(A, 1, d, n) - jacobi_spectrum_oracle(A, 1, d, n)) < 1e-6
