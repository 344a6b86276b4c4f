import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from susyvcs.fock import build_layout, susy_hamiltonian
from susyvcs.grassmann import (BerezinConvention, GradedFunction, GrassmannElement, HolFunction,
                               convention_table, graded_frame, graded_scalar_product,
                               grassmann_vcs, hol_checks, hol_gram, hol_inner, q_hol_action,
                               q_hol_dagger_action, q_hol_matrices, w_inverse, w_map, w_matrix)
from susyvcs.spectra import EnergySequence, eps
from susyvcs.vcs import VcsFamily

FAM = VcsFamily.landau(1, 8)
L = FAM.layout


def _mono(N, n, anti=False):
    a = np.zeros(N + 1, complex)
    b = np.zeros(N + 2, complex)
    (b if anti else a)[n] = 1.0
    return HolFunction(a, b)


def test_anticommutator_on_monomial():
    f = _mono(L.N, 3)
    g = q_hol_dagger_action(L, q_hol_action(L, f)) + q_hol_action(L, q_hol_dagger_action(L, f))
    e3 = float(eps(FAM.seq, 3))
    assert g.allclose(f * e3)


def test_supercharges_nilpotent():
    Q, Qd = q_hol_matrices(L)
    assert np.all(Q @ Q == 0) and np.all(Qd @ Qd == 0)


def test_anticommutator_matches_hamiltonian():
    Q, Qd = q_hol_matrices(L)
    W = w_matrix(L)
    H = susy_hamiltonian(L).matrix[: L.susy_dim, : L.susy_dim]
    assert np.max(np.abs(Qd @ Q + Q @ Qd - W @ H @ np.linalg.inv(W))) < 1e-12


def test_w_map_round_trip():
    rng = np.random.default_rng(1)
    v = rng.normal(size=L.susy_dim) + 1j * rng.normal(size=L.susy_dim)
    assert np.allclose(w_inverse(L, w_map(L, v)), v)


@pytest.mark.parametrize("method", ["angular", "quadrature"])
def test_map_is_unitary(method):
    G = hol_gram(FAM, method)
    tol = 1e-12 if method == "angular" else 1e-10
    assert np.max(np.abs(G - np.eye(L.susy_dim))) < tol


def test_sectors_are_orthogonal():
    f, g = _mono(L.N, 2), _mono(L.N, 2, anti=True)
    assert hol_inner(f, g, FAM.measure) == 0


def test_holfunction_validation():
    with pytest.raises(ValueError):
        HolFunction(np.zeros(3), np.ones(4))
    with pytest.raises(ValueError):
        HolFunction(np.zeros(3), np.zeros(3))


def test_grassmann_products():
    z, zb = GrassmannElement.of(zeta=1.0), GrassmannElement.of(zetabar=1.0)
    assert z.mul(zb)["top"] == -1.0
    assert zb.mul(z)["top"] == 1.0
    assert z.mul(z)["top"] == 0
    conv = BerezinConvention()
    assert zb.mul(z).berezin(conv) == 1.0
    assert BerezinConvention("zeta_zetabar").top_sign == -1
    with pytest.raises(ValueError):
        BerezinConvention("other")


def test_graded_product_soul_nilpotent():
    f = grassmann_vcs(FAM, 0.3)
    sq = f * f
    assert np.allclose(sq.soul, 2 * np.convolve(f.body, f.soul)[: L.N + 1])


def test_grassmann_state_at_origin():
    f = grassmann_vcs(FAM, 0)
    assert f.body[0] == 1 and np.all(f.soul == 0)


def test_graded_scalar_product_reduces_to_sector_sum():
    rng = np.random.default_rng(5)
    body = rng.normal(size=L.N + 1) + 0j
    soul = rng.normal(size=L.N + 1) + 0j
    soul[0] = 0
    f = GradedFunction(body, soul)
    zero = np.zeros(L.N + 2)
    plain = sum(hol_inner(HolFunction(x, zero), HolFunction(x, zero), FAM.measure)
                for x in (body, soul))
    val = graded_scalar_product(f, f, FAM.measure, BerezinConvention())
    assert val == pytest.approx(plain, rel=1e-12)


def test_convention_table_single_identity():
    rows = convention_table(VcsFamily.oscillator(10))
    good = [(r["integral"], r["ordering"]) for r in rows if r["identity"]]
    assert good == [("zetabar_zeta", "ket_bra")]
    bad = [r for r in rows if not r["identity"]]
    assert all(max(r["body_deviation"], r["soul_deviation"]) == pytest.approx(2.0) for r in bad)


@pytest.mark.parametrize("fam", [VcsFamily.oscillator(12), VcsFamily.landau(1, 12),
                                 VcsFamily.landau(3, 12)])
def test_graded_frame_identity(fam):
    db, ds = graded_frame(fam).deviations(fam.N)
    assert db < 1e-8 and ds < 1e-8
    assert all(c.status == "pass" for c in hol_checks(fam))


@given(st.integers(0, 7), st.booleans())
def test_supercharge_swaps_sectors(n, anti):
    f = _mono(L.N, n + (1 if anti else 0), anti=anti)
    g = q_hol_action(L, f)
    if anti:
        assert np.all(g.analytic == 0) and np.all(g.antianalytic == 0)
    else:
        assert np.all(g.analytic == 0)
