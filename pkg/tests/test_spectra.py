import math
from collections import Counter
from fractions import Fraction as F

import pytest

from fourbody.diffop import matrix_on_basis
from fourbody.errors import BadLimit
from fourbody.geometry import MassConfig
from fourbody.oscillator import GaugeParams, SpecialModel, build_h_es, closed_form_ground_energy
from fourbody.spectra import closed_form_special_spectra, fundamental_frequencies, special_operator, spectrum


def test_equal_mass_frequencies():
    for a, w in ((1, 1), (2, 3), (F(1, 2), F(5, 2))):
        ff = fundamental_frequencies(build_h_es(MassConfig.equal(1), GaugeParams.uniform(a, w), 3))
        assert ff.exact and ff.values == (8 * F(a) * F(w),) * 6


def test_general_mass_frequencies_trace():
    h = build_h_es(MassConfig.of(1, 2, 3, 4), GaugeParams.uniform(1), 3)
    ff = fundamental_frequencies(h)
    block = matrix_on_basis(h, 1).block(1)
    trace = sum(block[i][i] for i in range(6))
    assert all(float(v) > 0 for v in ff.values)
    assert abs(sum(float(v) for v in ff.values) - float(trace)) < 1e-9


def test_zero_gauge_frequencies():
    h = build_h_es(MassConfig.of(1, 2, 3, 4), GaugeParams.uniform(0), 3)
    assert all(v == 0 for v in fundamental_frequencies(h).values)


def test_equal_mass_p2():
    tab = spectrum(build_h_es(MassConfig.equal(1), GaugeParams.uniform(1), 3), 2)
    assert Counter(tab.energies) == {0: 1, 8: 6, 16: 21}
    assert tab.linear and tab.charpoly_ok and tab.block_triangular


def test_n0():
    tab = spectrum(build_h_es(MassConfig.of(1, 2, 3, 4), GaugeParams.uniform(1), 3), 0)
    assert tab.energies == [0]


def test_general_masses_linear():
    tab = spectrum(build_h_es(MassConfig.of(1, 2, 3, 4), GaugeParams.from_values([1, 2, 1, 3, 2, 1]), 3), 2)
    assert tab.linear and tab.max_deviation < 1e-9
    assert tab.block_triangular
    assert tab.charpoly_ok
    assert len(tab.levels) == math.comb(8, 6)


def test_block_triangular_n3():
    mat = matrix_on_basis(build_h_es(MassConfig.of(2, 1, 5, 3), GaugeParams.from_values([1, 1, 2, 1, 3, 1]), F(7, 2)), 3)
    assert mat.is_block_triangular()


def test_closed_forms():
    gp = GaugeParams.uniform(1)
    assert closed_form_special_spectra("equal", gp, 3, (1, 0, 0, 0, 0, 0)) == 8
    gmol = GaugeParams(0, 1, 2, 3, 1, 2, 1)
    e0 = closed_form_special_spectra("molecular", gmol, 3, (0,) * 5)
    assert e0 == 3 * (1 + 2 + 3 + 1 + 2)
    g3 = GaugeParams(0, 0, 2, 0, 3, 1, 1)
    cls = (1, 2, 3)
    e0 = closed_form_special_spectra("three-center", g3, 3, (0, 0, 0), classical=cls)
    expected = closed_form_ground_energy("three-center", g3, 3).eval([1, 2, 0, 3, 0, 0])
    assert e0 == expected == 3 * 6 + 2 * (2 * 3 * 1 + 2 * 1 * 2 + 3 * 1 * 3)
    with pytest.raises(BadLimit):
        closed_form_special_spectra("three-center", gp, 3, (0, 0, 0))


def test_special_spectra_linear():
    for variant, gp in (("atomic", GaugeParams.from_values([1, 2, 1, 3, 1, 2])),
                        ("molecular", GaugeParams(0, 1, 2, 1, 3, 1)),
                        ("three-center", GaugeParams(0, 0, 2, 0, 1, 3))):
        model = SpecialModel.with_classical(variant, 1, [1] * len(SpecialModel(variant).classical_vars))
        tab = spectrum(special_operator(model, gp, 3), 2)
        assert tab.linear
