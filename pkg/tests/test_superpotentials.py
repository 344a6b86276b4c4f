import json
from fractions import Fraction

import pytest

from susyvcs.superpotentials import (BUILTIN_SPECS, SuperpotentialSpec, build_operators,
                                     canonical_relations, case1_identities, case2_commutation,
                                     divergence, expanded_hamiltonians, hamiltonians,
                                     inverse_x_spec, magnetic_field, symplectic_check,
                                     verify_relations)
from susyvcs.weyl import GaussianRational, LaurentPoly, WeylElement, commutator

I = GaussianRational(0, 1)
HALF = Fraction(1, 2)


def _named(checks):
    return {c.name: c for c in checks}


def test_canonical_relations_hold():
    for c in canonical_relations():
        assert c.holds, c.name


def test_symplectic_change_of_variables():
    ok, _ = symplectic_check()
    assert ok


def test_standard_spec_ladder_is_minus_b():
    checks = _named(canonical_relations())
    assert checks["E = -B"].holds
    assert checks["H^b = E+E = H0 - 1/2"].holds


def test_standard_commutator_q_p():
    ops = build_operators(BUILTIN_SPECS["standard"])
    assert commutator(ops.q, ops.p) == WeylElement.scalar(I)


@pytest.mark.parametrize("name,field", [("standard", 1), ("case1", 0), ("coupled", 1)])
def test_magnetic_field(name, field):
    assert magnetic_field(BUILTIN_SPECS[name]) == LaurentPoly.constant(field)


def test_inverse_x_commutator_e_edag():
    spec = inverse_x_spec(-1)
    ops = build_operators(spec)
    # div W = -kappa / x^2 = 1/x^2, so [e, e+] = -1/x^2
    assert divergence(spec) == LaurentPoly.monomial(-2, 0, 1)
    assert commutator(ops.e, ops.e_dag) == WeylElement.function(LaurentPoly.monomial(-2, 0, -1))


def test_coupled_spec_mixed_commutators():
    ops = build_operators(BUILTIN_SPECS["coupled"])
    assert commutator(ops.k, ops.e).is_zero()
    assert commutator(ops.k, ops.e_dag) == WeylElement.scalar(1)


def test_case1_relations():
    checks = _named(case1_identities(5))
    assert checks["X+ - X- = 1"].holds
    assert checks["[k,e] = 1"].holds
    assert checks["h^b = h^f"].holds
    for n in range(6):
        assert checks[f"e k^{n + 1} = k^{n + 1} e - {n + 1} k^{n}"].holds


def test_case1_oscillator_sign():
    checks = _named(case1_identities(1))
    assert checks["a+a = H0_down - 1/2"].holds
    ref = checks["a+a = H0_down + 1/2 (reference form)"]
    assert not ref.holds and ref.status == "flagged"


def test_quartic_hamiltonian_expansion():
    spec = BUILTIN_SPECS["quartic"]
    px, py, x = WeylElement.px(), WeylElement.py(), WeylElement.x()
    expected = (px * px + py * py + x * x * py + x ** 4 * Fraction(1, 4) - x) * HALF
    assert hamiltonians(spec)["h_b"] == expected


@pytest.mark.parametrize("name", sorted(BUILTIN_SPECS))
def test_verify_relations_has_no_fail(name):
    for c in verify_relations(BUILTIN_SPECS[name]):
        assert c.status in ("pass", "flagged"), c.name


@pytest.mark.parametrize("name", sorted(BUILTIN_SPECS))
def test_expanded_forms(name):
    spec = BUILTIN_SPECS[name]
    assert hamiltonians(spec)["h_b"] == expanded_hamiltonians(spec)["h_b"]
    assert hamiltonians(spec)["h_f"] == expanded_hamiltonians(spec)["h_f"]


def test_partner_difference_is_plus_divergence():
    spec = BUILTIN_SPECS["standard"]
    h = hamiltonians(spec)
    assert h["h_b"] - h["h_f"] == WeylElement.function(divergence(spec))


def test_case2_requires_separable_spec():
    with pytest.raises(ValueError):
        case2_commutation(BUILTIN_SPECS["coupled"])


def test_case2_inverse_x():
    checks = _named(case2_commutation(inverse_x_spec()))
    assert checks["inverse_x(kappa=-1): [k,e] = 0"].holds
    vanishing = checks["inverse_x(kappa=-1): [k,e+] = 0"]
    assert vanishing.status == "flagged"
    assert checks["inverse_x(kappa=-1): [k,e+] = i(dxW1 - dyW2)"].holds


def test_spec_file_round_trip(tmp_path):
    spec = BUILTIN_SPECS["coupled"]
    path = tmp_path / "w.json"
    path.write_text(json.dumps(spec.to_dict()))
    assert SuperpotentialSpec.from_file(path) == spec


def test_spec_rejects_unknown_keys_and_non_polynomials():
    with pytest.raises(ValueError):
        SuperpotentialSpec.from_dict({"w1": [], "w2": [], "extra": 1})
    with pytest.raises(ValueError):
        SuperpotentialSpec.from_dict({"w1": "sin(x)", "w2": []})
    with pytest.raises(TypeError):
        SuperpotentialSpec("x", LaurentPoly())
