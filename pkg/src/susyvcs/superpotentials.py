"""Operator algebras induced by a planar vector superpotential W = (W1, W2, 0).

With hbar = 1 the shifted momenta are

    q = p_x - W2,  p = p_y + W1,  q' = p_y - W1,  p' = p_x + W2,

and the ladder operators are ``e = -(q' + i p') / sqrt(2)``,
``k = -(q + i p) / sqrt(2)`` together with their formal adjoints. Every
identity below is checked as an exact equality of normal-ordered operators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .weyl import GaussianRational, LaurentPoly, WeylElement, commutator

__all__ = [
    "SuperpotentialSpec",
    "OperatorBundle",
    "RelationCheck",
    "BUILTIN_SPECS",
    "build_operators",
    "divergence",
    "magnetic_field",
    "hamiltonians",
    "expanded_hamiltonians",
    "verify_relations",
    "canonical_relations",
    "case1_identities",
    "case2_commutation",
    "symplectic_check",
    "inverse_x_spec",
]

I = GaussianRational(0, 1)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SuperpotentialSpec:
    """Components of W = (w1, w2, 0) as Laurent polynomials in (x, y)."""

    w1: LaurentPoly
    w2: LaurentPoly
    label: str = ""

    def __post_init__(self):
        for comp in (self.w1, self.w2):
            if not isinstance(comp, LaurentPoly):
                raise TypeError(
                    "superpotential components must be Laurent polynomials in x, y; "
                    f"got {type(comp).__name__}"
                )

    @property
    def is_case2(self) -> bool:
        """True when W1 depends on x only and W2 on y only."""
        return all(b == 0 for (_, b) in self.w1.terms) and all(
            a == 0 for (a, _) in self.w2.terms
        )

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "w1": self.w1.to_records(),
            "w2": self.w2.to_records(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SuperpotentialSpec":
        unknown = set(data) - {"label", "w1", "w2"}
        if unknown:
            raise ValueError(f"unknown superpotential keys: {sorted(unknown)}")
        for key in ("w1", "w2"):
            if key not in data:
                raise ValueError(f"superpotential file is missing '{key}'")
            if not isinstance(data[key], list):
                raise ValueError(
                    f"'{key}' must be a list of monomial records; only Laurent "
                    "polynomial superpotentials are supported"
                )
        return cls(
            LaurentPoly.from_records(data["w1"]),
            LaurentPoly.from_records(data["w2"]),
            str(data.get("label", "")),
        )

    @classmethod
    def from_file(cls, path) -> "SuperpotentialSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))


_x = LaurentPoly.x()
_y = LaurentPoly.y()

BUILTIN_SPECS: dict[str, SuperpotentialSpec] = {
    "standard": SuperpotentialSpec(_x * -HALF, _y * -HALF, "standard"),
    "case1": SuperpotentialSpec(_y * -HALF, _x * HALF, "case1"),
    "coupled": SuperpotentialSpec((_x + _y) * -HALF, (_x + _y) * -HALF, "coupled"),
    "inverse_x": SuperpotentialSpec(LaurentPoly.monomial(-1, 0, -1), LaurentPoly(),
                                    "inverse_x"),
    "quartic": SuperpotentialSpec(LaurentPoly.monomial(2, 0, -HALF), LaurentPoly(),
                                  "quartic"),
}


def inverse_x_spec(kappa=-1) -> SuperpotentialSpec:
    """W = (kappa / x, 0)."""
    return SuperpotentialSpec(LaurentPoly.monomial(-1, 0, kappa), LaurentPoly(),
                              f"inverse_x(kappa={kappa})")


@dataclass(frozen=True)
class OperatorBundle:
    x: WeylElement
    y: WeylElement
    px: WeylElement
    py: WeylElement
    q: WeylElement
    p: WeylElement
    q_prime: WeylElement
    p_prime: WeylElement
    e: WeylElement
    e_dag: WeylElement
    k: WeylElement
    k_dag: WeylElement


def build_operators(spec: SuperpotentialSpec) -> OperatorBundle:
    x, y = WeylElement.x(), WeylElement.y()
    px, py = WeylElement.px(), WeylElement.py()
    w1 = WeylElement.function(spec.w1)
    w2 = WeylElement.function(spec.w2)
    q = px - w2
    p = py + w1
    qp = py - w1
    pp = px + w2
    e = -(qp + pp * I).times_sqrt2(-1)
    k = -(q + p * I).times_sqrt2(-1)
    return OperatorBundle(
        x=x, y=y, px=px, py=py, q=q, p=p, q_prime=qp, p_prime=pp,
        e=e, e_dag=e.adjoint(), k=k, k_dag=k.adjoint(),
    )


def divergence(spec: SuperpotentialSpec) -> LaurentPoly:
    return spec.w1.diff(1, 0) + spec.w2.diff(0, 1)


def magnetic_field(spec: SuperpotentialSpec) -> LaurentPoly:
    """z-component of the field, ``B = -div W``."""
    return -divergence(spec)


def hamiltonians(spec: SuperpotentialSpec) -> dict[str, WeylElement]:
    ops = build_operators(spec)
    return {
        "h_b": ops.e_dag * ops.e,
        "h_f": ops.e * ops.e_dag,
        "hh_b": ops.k_dag * ops.k,
        "hh_f": ops.k * ops.k_dag,
    }


def expanded_hamiltonians(spec: SuperpotentialSpec) -> dict[str, WeylElement]:
    """h^b and h^f written as ``1/2 (p_x + W2)^2 + 1/2 (p_y - W1)^2 +- 1/2 div W``."""
    ops = build_operators(spec)
    kinetic = (ops.p_prime * ops.p_prime + ops.q_prime * ops.q_prime) * HALF
    div = WeylElement.function(divergence(spec)) * HALF
    return {"h_b": kinetic + div, "h_f": kinetic - div}


@dataclass
class RelationCheck:
    """One exact operator identity ``lhs == rhs``.

    ``expect_hold=False`` marks a reference statement that is known not to
    hold; such entries are reported as ``flagged``.
    """

    name: str
    anchor: str
    lhs: WeylElement
    rhs: WeylElement
    expect_hold: bool = True
    note: str = ""
    residual: WeylElement = field(init=False)

    def __post_init__(self):
        self.residual = self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()

    @property
    def status(self) -> str:
        if self.holds:
            return "pass"
        return "fail" if self.expect_hold else "flagged"

    def as_entry(self) -> dict:
        return {
            "name": self.name,
            "paper_anchor": self.anchor,
            "status": self.status,
            "metric": self.residual.term_count(),
            "tolerance": 0,
            "residual": repr(self.residual) if not self.holds else "0",
            "note": self.note,
        }


def _fn(poly: LaurentPoly) -> WeylElement:
    return WeylElement.function(poly)


def verify_relations(spec: SuperpotentialSpec) -> list[RelationCheck]:
    """Commutation rules and partner-Hamiltonian relations for ``spec``."""
    ops = build_operators(spec)
    w1, w2 = spec.w1, spec.w2
    div = divergence(spec)
    i_ = WeylElement.scalar(I)
    h = hamiltonians(spec)
    ex = expanded_hamiltonians(spec)
    tag = spec.label or "spec"
    checks = [
        RelationCheck(f"{tag}: [q,p] = -i div W", "momentum commutators",
                      commutator(ops.q, ops.p), -i_ * _fn(div)),
        RelationCheck(f"{tag}: [q',p'] = -i div W", "momentum commutators",
                      commutator(ops.q_prime, ops.p_prime), -i_ * _fn(div)),
        RelationCheck(f"{tag}: [p',p] = -i dxW1 + i dyW2", "momentum commutators",
                      commutator(ops.p_prime, ops.p),
                      -i_ * _fn(w1.diff(1, 0)) + i_ * _fn(w2.diff(0, 1))),
        RelationCheck(f"{tag}: [q',q] = -i dxW1 + i dyW2", "momentum commutators",
                      commutator(ops.q_prime, ops.q),
                      -i_ * _fn(w1.diff(1, 0)) + i_ * _fn(w2.diff(0, 1))),
        RelationCheck(f"{tag}: [q',p] = -2i dyW1", "momentum commutators",
                      commutator(ops.q_prime, ops.p), i_ * _fn(w1.diff(0, 1)) * -2),
        RelationCheck(f"{tag}: [p',q] = 2i dxW2", "momentum commutators",
                      commutator(ops.p_prime, ops.q), i_ * _fn(w2.diff(1, 0)) * 2),
        RelationCheck(f"{tag}: [e,e+] = -div W", "ladder commutators",
                      commutator(ops.e, ops.e_dag), -_fn(div)),
        RelationCheck(f"{tag}: [k,k+] = -div W", "ladder commutators",
                      commutator(ops.k, ops.k_dag), -_fn(div)),
        RelationCheck(f"{tag}: [k,e] = dxW2 - dyW1", "ladder commutators",
                      commutator(ops.k, ops.e), _fn(w2.diff(1, 0) - w1.diff(0, 1))),
        RelationCheck(f"{tag}: [k,e+] = -dxW2 - dyW1 (reference form)", "ladder commutators",
                      commutator(ops.k, ops.e_dag), _fn(-w2.diff(1, 0) - w1.diff(0, 1)),
                      expect_hold=(w1.diff(1, 0) == w2.diff(0, 1)),
                      note="reference form drops i(dxW1 - dyW2)"),
        RelationCheck(f"{tag}: [k,e+] = i(dxW1 - dyW2) - dxW2 - dyW1", "ladder commutators",
                      commutator(ops.k, ops.e_dag), _k_edag(spec)),
        RelationCheck(f"{tag}: e+ is the formal adjoint of e", "ladder operators",
                      ops.e_dag, -(ops.q_prime - ops.p_prime * I).times_sqrt2(-1)),
        RelationCheck(f"{tag}: h^b - h^f = hh^b - hh^f", "partner difference",
                      h["h_b"] - h["h_f"], h["hh_b"] - h["hh_f"]),
        RelationCheck(f"{tag}: h^b - h^f = div W (sign fixed by [e,e+])", "partner difference",
                      h["h_b"] - h["h_f"], _fn(div)),
        RelationCheck(f"{tag}: h^b - h^f = -div W (reference form)", "partner difference",
                      h["h_b"] - h["h_f"], -_fn(div), expect_hold=div.is_zero(),
                      note="reference sign contradicts [e,e+] = -div W"),
        RelationCheck(f"{tag}: h^b = e+e expanded form", "expanded partners",
                      h["h_b"], ex["h_b"]),
        RelationCheck(f"{tag}: h^f = ee+ expanded form", "expanded partners",
                      h["h_f"], ex["h_f"]),
    ]
    return checks


def _k_edag(spec: SuperpotentialSpec) -> WeylElement:
    w1, w2 = spec.w1, spec.w2
    return _fn((w1.diff(1, 0) - w2.diff(0, 1)) * I - w2.diff(1, 0) - w1.diff(0, 1))


def case2_commutation(spec: SuperpotentialSpec) -> list[RelationCheck]:
    """Mixed commutators of the two ladder pairs for W = (W1(x), W2(y)).

    ``[k, e]`` vanishes for every such W, but ``[k, e+]`` equals
    ``i (dxW1 - dyW2)`` and vanishes only when the two derivatives agree.
    """
    if not spec.is_case2:
        raise ValueError(f"{spec.label or 'spec'} is not of the form (W1(x), W2(y))")
    ops = build_operators(spec)
    zero = WeylElement()
    tag = spec.label or "spec"
    symmetric = spec.w1.diff(1, 0) == spec.w2.diff(0, 1)
    note = "" if symmetric else "nonzero: equals i(dxW1 - dyW2)"
    return [
        RelationCheck(f"{tag}: [k,e] = 0", "separable superpotential", commutator(ops.k, ops.e), zero),
        RelationCheck(f"{tag}: [k+,e+] = 0", "separable superpotential",
                      commutator(ops.k_dag, ops.e_dag), zero),
        RelationCheck(f"{tag}: [k,e+] = 0", "separable superpotential", commutator(ops.k, ops.e_dag), zero,
                      expect_hold=symmetric, note=note),
        RelationCheck(f"{tag}: [k+,e] = 0", "separable superpotential", commutator(ops.k_dag, ops.e), zero,
                      expect_hold=symmetric, note=note),
        RelationCheck(f"{tag}: [k,e+] = i(dxW1 - dyW2)", "separable superpotential",
                      commutator(ops.k, ops.e_dag), _k_edag(spec)),
    ]


def canonical_relations() -> list[RelationCheck]:
    """Canonical commutators of (x, y, p_x, p_y) and of the Landau variables."""
    x, y = WeylElement.x(), WeylElement.y()
    px, py = WeylElement.px(), WeylElement.py()
    half = HALF
    Q = px + y * half
    P = py - x * half
    Qp = py + x * half
    Pp = px - y * half
    one_i = WeylElement.scalar(I)
    zero = WeylElement()
    ops = build_operators(BUILTIN_SPECS["standard"])
    B = (Qp + Pp * I).times_sqrt2(-1)
    H0 = (Pp * Pp + Qp * Qp) * half
    return [
        RelationCheck("[x,p_x] = i", "canonical commutators", commutator(x, px), one_i),
        RelationCheck("[y,p_y] = i", "canonical commutators", commutator(y, py), one_i),
        RelationCheck("[x,p_y] = 0", "canonical commutators", commutator(x, py), zero),
        RelationCheck("[y,p_x] = 0", "canonical commutators", commutator(y, px), zero),
        RelationCheck("[x,y] = 0", "canonical commutators", commutator(x, y), zero),
        RelationCheck("[p_x,p_y] = 0", "canonical commutators", commutator(px, py), zero),
        RelationCheck("[Q,P] = i", "canonical commutators", commutator(Q, P), one_i),
        RelationCheck("[Q',P'] = i", "canonical commutators", commutator(Qp, Pp), one_i),
        RelationCheck("[Q,P'] = 0", "canonical commutators", commutator(Q, Pp), zero),
        RelationCheck("[Q',P] = 0", "canonical commutators", commutator(Qp, P), zero),
        RelationCheck("[Q,Q'] = 0", "canonical commutators", commutator(Q, Qp), zero),
        RelationCheck("[P,P'] = 0", "canonical commutators", commutator(P, Pp), zero),
        RelationCheck("standard q,p,q',p' match Q,P,Q',P'", "shifted momenta",
                      ops.q + ops.p * 2 + ops.q_prime * 3 + ops.p_prime * 5,
                      Q + P * 2 + Qp * 3 + Pp * 5),
        RelationCheck("[B,B+] = 1", "Landau ladder",
                      commutator(B, B.adjoint()), WeylElement.scalar(1)),
        RelationCheck("H0 = B+B + 1/2", "Landau ladder",
                      H0, B.adjoint() * B + WeylElement.scalar(half)),
        RelationCheck("E = -B", "ladder operators", ops.e, -B),
        RelationCheck("H^b = E+E = H0 - 1/2", "expanded partners",
                      ops.e_dag * ops.e, H0 - WeylElement.scalar(half)),
        RelationCheck("H^f = EE+ = H0 + 1/2", "expanded partners",
                      ops.e * ops.e_dag, H0 + WeylElement.scalar(half)),
    ]


def symplectic_check() -> tuple[bool, list[list[Fraction]]]:
    """Exact check of ``S J S^T = J`` for the map (x,y,p_x,p_y) -> (Q,Q',P,P')."""
    h = HALF
    S = [
        [0, h, 1, 0],
        [h, 0, 0, 1],
        [-h, 0, 0, 1],
        [0, -h, 1, 0],
    ]
    J = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    SJ = [[sum(Fraction(S[i][k]) * J[k][j] for k in range(4)) for j in range(4)]
          for i in range(4)]
    SJST = [[sum(SJ[i][k] * S[j][k] for k in range(4)) for j in range(4)]
            for i in range(4)]
    return SJST == [[Fraction(v) for v in row] for row in J], SJST


def case1_identities(n_max: int = 5) -> list[RelationCheck]:
    """Operator identities for the zero-divergence superpotential W = (-y/2, x/2)."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    spec = BUILTIN_SPECS["case1"]
    ops = build_operators(spec)
    e, k = ops.e, ops.k
    one = WeylElement.scalar(1)
    half = HALF
    x_plus = k * e
    x_minus = e * k
    checks = [
        RelationCheck("X+ - X- = 1", "zero-divergence field", x_plus - x_minus, one),
        RelationCheck("[e,e+] = 0", "zero-divergence field", commutator(e, ops.e_dag), WeylElement()),
        RelationCheck("[k,k+] = 0", "zero-divergence field", commutator(k, ops.k_dag), WeylElement()),
        RelationCheck("[k,e+] = 0", "zero-divergence field", commutator(k, ops.e_dag), WeylElement()),
        RelationCheck("[k,e] = 1", "zero-divergence field", commutator(k, e), one),
        RelationCheck("h^b = h^f", "zero-divergence field", ops.e_dag * e, e * ops.e_dag),
        RelationCheck(
            "h^b = 1/2 (p_x + x/2)^2 + 1/2 (p_y + y/2)^2", "zero-divergence field",
            ops.e_dag * e,
            ((ops.px + ops.x * half) ** 2 + (ops.py + ops.y * half) ** 2) * half,
        ),
    ]
    for n in range(n_max + 1):
        kn = k**n
        en = e**n
        checks.append(RelationCheck(
            f"e k^{n + 1} = k^{n + 1} e - {n + 1} k^{n}", "zero-divergence ladders",
            e * (kn * k), (kn * k) * e - kn * (n + 1)))
        checks.append(RelationCheck(
            f"k e^{n + 1} = e^{n + 1} k + {n + 1} e^{n}", "zero-divergence ladders",
            k * (en * e), (en * e) * k + en * (n + 1)))
    complex_form = (
        (ops.px - ops.y * (I * half)) ** 2 + (ops.py + ops.x * (I * half)) ** 2
    ) * (I * half)
    checks.append(RelationCheck("X+ - 1/2 = (i/2){(p_x - iy/2)^2 + (p_y + ix/2)^2}",
                                "zero-divergence complex form", x_plus - one * half, complex_form))
    checks.append(RelationCheck("X- + 1/2 = (i/2){(p_x - iy/2)^2 + (p_y + ix/2)^2}",
                                "zero-divergence complex form", x_minus + one * half, complex_form))
    a = (k + ops.e_dag).times_sqrt2(-1)
    a_dag = (ops.k_dag + e).times_sqrt2(-1)
    h_down = ((ops.px + ops.y * half) ** 2 + (ops.py - ops.x * half) ** 2) * half
    checks.extend([
        RelationCheck("a+ is the adjoint of a", "zero-divergence oscillator", a.adjoint(), a_dag),
        RelationCheck("[a,a+] = 1", "zero-divergence oscillator", commutator(a, a_dag), one),
        RelationCheck("a+a = H0_down + 1/2 (reference form)", "zero-divergence oscillator",
                      a_dag * a, h_down + one * half, expect_hold=False,
                      note="sign slip; a+a = H0_down - 1/2"),
        RelationCheck("a+a = H0_down - 1/2", "zero-divergence oscillator", a_dag * a, h_down - one * half),
        RelationCheck("aa+ = H0_down + 1/2", "zero-divergence oscillator", a * a_dag, h_down + one * half),
    ])
    return checks
