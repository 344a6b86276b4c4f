import numpy as np
import pytest

from susyvcs.fock import (build_layout, export_matrix, formal_annihilator_check, ladder_matrices,
                          psi_basis, shift_relations, susy_hamiltonian)
from susyvcs.spectra import EnergySequence

OSC = EnergySequence.oscillator()


def test_layout_dimensions():
    L = build_layout(OSC, 4)
    assert (L.bosonic_dim, L.fermionic_dim, L.susy_dim) == (5, 5, 10)
    assert build_layout(OSC, 4, extended=True).dim == 11
    assert build_layout(EnergySequence.landau_bosonic(1), 40).dim == 82


def test_layout_preconditions():
    with pytest.raises(ValueError):
        build_layout(OSC, 1)
    with pytest.raises(ValueError):
        build_layout(EnergySequence.table([0, 1, 2]), 4)
    with pytest.raises(IndexError):
        build_layout(OSC, 3).chi


def test_bosonic_spectrum():
    L = build_layout(OSC, 4)
    H = susy_hamiltonian(L).matrix
    bos = np.linalg.eigvalsh(H[:5, :5])
    assert np.allclose(bos, [0, 1, 2, 3, 4])
    # fermionic partner repeats levels 1..4; the truncated top level is 0
    fer = np.sort(np.diag(H[5:, 5:]).real)
    assert np.allclose(fer, [0, 1, 2, 3, 4])


def test_ladder_entries():
    L = build_layout(EnergySequence.landau_bosonic(1), 3, extended=True)
    lad = ladder_matrices(L)
    e = L.energies()
    assert lad.A.matrix[L.f(0), L.b(1)] == pytest.approx(np.sqrt(e[1]))
    assert lad.a_f.matrix[L.f(0), L.f(1)] == pytest.approx(np.sqrt(e[2]))
    assert lad.at_f.matrix[L.chi, L.f(0)] == pytest.approx(np.sqrt(e[1]))
    assert lad.P_H.matrix[L.chi, L.chi] == 0
    with pytest.raises(ValueError):
        lad.A.matrix[0, 0] = 1.0


@pytest.mark.parametrize("seq", [OSC, EnergySequence.landau_bosonic(1),
                                 EnergySequence.landau_bosonic(3),
                                 EnergySequence.table([0, 0.5, 0.9, 1.2, 1.4, 1.5, 1.55])])
def test_shift_relations(seq):
    for c in shift_relations(build_layout(seq, 5, extended=True)):
        assert c.status == "pass", (c.name, c.metric)


def test_formal_annihilator_discrepancy():
    checks = {c.name: c for c in formal_annihilator_check(build_layout(OSC, 6))}
    assert checks["A+A Psi_1 = (eps_1 / 2) Psi_1"].holds
    flagged = checks["A+A coincides with H^SUSY on span{Psi_n}"]
    assert flagged.status == "flagged"
    assert flagged.metric == pytest.approx(0.5)


def test_psi_basis_norms():
    L = build_layout(OSC, 4, extended=True)
    pb = psi_basis(L, tilde=True)
    assert np.allclose(pb.norms, 1.0)
    with pytest.raises(ValueError):
        psi_basis(build_layout(OSC, 4), tilde=True)


def test_export_matrix(tmp_path):
    L = build_layout(OSC, 2)
    text = export_matrix(ladder_matrices(L).A, tmp_path / "A.txt")
    rows = [list(map(float, r.split())) for r in text.strip().splitlines()]
    assert np.allclose(np.array(rows), ladder_matrices(L).A.matrix.real)
    assert (tmp_path / "A.txt").read_text() == text
