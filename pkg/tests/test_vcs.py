import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from susyvcs.measures import landau_measure, oscillator_measure
from susyvcs.spectra import EnergySequence
from susyvcs.vcs import (DomainError, NearBoundaryWarning, VcsFamily, coeffs, extended_frame,
                         extended_norm2, fqhe_frame, frame_operator, kernel_sum, normalization,
                         overlap, state_vector)

OSC = VcsFamily.oscillator(30)
LAN = VcsFamily.landau(1, 30)


def test_oscillator_normalization():
    assert normalization(OSC, 1.0) == pytest.approx(2 * math.e - 1, rel=1e-14)
    assert normalization(OSC, 0) == 1.0


def test_landau_normalization_closed_form():
    # |z|^2 = u m^2 / 2 with u = 1/2
    u = 0.5
    expected = 3 + 4 * u / (1 - u) + 4 / u + 4 * math.log(1 - u) / u ** 2
    assert normalization(LAN, math.sqrt(u / 2)) == pytest.approx(expected, rel=1e-12)


def test_state_at_origin():
    v = state_vector(OSC, 0)
    e = np.zeros_like(v)
    e[OSC.layout.b(0)] = 1
    assert np.allclose(v, e)


def test_domain_errors():
    with pytest.raises(DomainError):
        normalization(LAN, 1.001 / math.sqrt(2))
    with pytest.warns(NearBoundaryWarning):
        normalization(LAN, 0.97 / math.sqrt(2))


def test_coeff_tail_bound():
    c = coeffs(VcsFamily.oscillator(10), 1.5)
    total = 1 + 2 * (np.sum(np.abs(c.bosonic[1:]) ** 2) + 0) / 1
    exact = normalization(VcsFamily.oscillator(10), 1.5)
    missing = exact - (np.sum(np.abs(c.bosonic) ** 2) + np.sum(np.abs(c.fermionic) ** 2))
    assert 0 <= missing <= c.tail_bound
    assert total > 1


def test_kernel_sum_exponential():
    s, bound = kernel_sum(EnergySequence.oscillator(), 0.7 + 0.2j)
    assert s == pytest.approx(cmath.exp(0.7 + 0.2j), rel=1e-15)
    assert bound < 1e-14


@pytest.mark.parametrize("fam", [VcsFamily.oscillator(40), VcsFamily.landau(1, 40),
                                 VcsFamily.landau(2, 20)])
def test_frame_is_identity(fam):
    assert frame_operator(fam).deviation < 1e-8


@pytest.mark.parametrize("N", [3, 10])
def test_angular_matches_quadrature(N):
    for fam in (VcsFamily.oscillator(N), VcsFamily.landau(1, N)):
        a = frame_operator(fam, "angular").matrix
        q = frame_operator(fam, "quadrature").matrix
        assert np.max(np.abs(a - q)) < 1e-6


def test_wrong_measure_is_detected():
    fam = VcsFamily(EnergySequence.landau_bosonic(1), 6, oscillator_measure(), validate=False)
    rep = frame_operator(fam)
    # F_11 = 1! / eps_1! with eps_1 = 3/8
    assert rep.diagonal_deviation()[fam.layout.b(1)] == pytest.approx(8 / 3 - 1, rel=1e-12)
    with pytest.raises(ValueError):
        VcsFamily(EnergySequence.landau_bosonic(1), 6, oscillator_measure())


def test_frame_csv(tmp_path):
    text = frame_operator(VcsFamily.oscillator(3)).to_csv(tmp_path / "f.csv")
    assert text.splitlines()[0] == "row,col,value,deviation"
    assert (tmp_path / "f.csv").read_text() == text


@pytest.mark.parametrize("fam", [VcsFamily.oscillator(12), VcsFamily.landau(1, 12)])
def test_extended_frame_normalized(fam):
    rep = extended_frame(fam, "normalized")
    assert rep.check("S is an orthogonal projector").holds
    assert rep.check("S = I on span").holds
    assert rep.check("S v = 0").holds
    full = rep.check("S = I on the whole")
    assert not full.holds and full.status == "flagged"
    assert all(c.status != "fail" for c in rep.checks)


def test_extended_frame_literal_flags():
    rep = extended_frame(VcsFamily.oscillator(12), "literal")
    assert not rep.check("S is an orthogonal projector").holds
    assert all(c.status != "fail" for c in rep.checks)
    z = 0.8
    n = normalization(VcsFamily.oscillator(12), z)
    assert extended_norm2(VcsFamily.oscillator(12), z, "literal") == pytest.approx(
        (n + 1) / (2 * n))
    with pytest.raises(ValueError):
        extended_frame(VcsFamily.oscillator(12), "other")


def test_fqhe_frame():
    rep = fqhe_frame(20, 3)
    assert rep.deviation < 1e-8
    assert rep.cross_k == 0.0
    with pytest.raises(ValueError):
        fqhe_frame(1, 3)


_points = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 0.65), st.floats(0, 2 * math.pi))


@given(_points, _points)
def test_overlap_properties(z1, z2):
    for fam in (OSC, LAN):
        o = overlap(fam, z1, z2)
        assert o == pytest.approx(np.conj(overlap(fam, z2, z1)), abs=1e-13)
        assert abs(o) <= 1 + 1e-12
    assert overlap(OSC, z1, z1) == pytest.approx(1.0, abs=1e-13)


@given(_points, st.floats(0, 2 * math.pi))
def test_phase_covariance(z, phi):
    v = state_vector(LAN, z)
    w = state_vector(LAN, z * cmath.exp(1j * phi))
    L = LAN.layout
    n = np.arange(L.N + 1)
    k = np.arange(1, L.N + 1)
    assert np.allclose(w[: L.N + 1], v[: L.N + 1] * np.exp(1j * n * phi), atol=1e-13)
    assert np.allclose(w[L.N + 1: 2 * L.N + 1], v[L.N + 1: 2 * L.N + 1] * np.exp(-1j * k * phi), atol=1e-13)


@given(_points)
def test_state_norm_bounded_by_one(z):
    v = state_vector(OSC, z)
    assert np.vdot(v, v).real <= 1 + 1e-13
