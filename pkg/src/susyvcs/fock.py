"""Truncated matrix representations of the SUSY shift operators.

Basis order of the full layout is fixed::

    Phi^b_0 .. Phi^b_N, Phi^f_0 .. Phi^f_N [, Phi_00]

where the optional last slot holds the adjoined vector ``chi`` (extended
layouts only). Operators are dense complex matrices on the whole layout.
Truncation only corrupts the top bosonic and fermionic levels, which are
recorded in ``edge`` and excluded from identity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import eigvalsh

from .checks import Check
from .spectra import EnergySequence, eps

__all__ = [
    "SpaceLayout",
    "TruncatedOperator",
    "LadderBundle",
    "PsiBasis",
    "build_layout",
    "ladder_matrices",
    "susy_hamiltonian",
    "psi_basis",
    "shift_relations",
    "formal_annihilator_check",
    "export_matrix",
]


@dataclass(frozen=True)
class SpaceLayout:
    seq: EnergySequence
    N: int
    extended: bool = False

    @property
    def bosonic_dim(self) -> int:
        return self.N + 1

    @property
    def fermionic_dim(self) -> int:
        return self.N + 1

    @property
    def susy_dim(self) -> int:
        return 2 * (self.N + 1)

    @property
    def dim(self) -> int:
        return self.susy_dim + int(self.extended)

    def b(self, n: int) -> int:
        """Index of ``Phi^b_n``."""
        if not 0 <= n <= self.N:
            raise IndexError(n)
        return n

    def f(self, n: int) -> int:
        """Index of ``Phi^f_n``."""
        if not 0 <= n <= self.N:
            raise IndexError(n)
        return self.N + 1 + n

    @property
    def chi(self) -> int:
        if not self.extended:
            raise IndexError("chi slot exists only in extended layouts")
        return self.susy_dim

    @property
    def edge(self) -> tuple[int, ...]:
        return (self.b(self.N), self.f(self.N))

    @property
    def retained(self) -> np.ndarray:
        """Indices not touched by truncation."""
        keep = np.ones(self.dim, dtype=bool)
        keep[list(self.edge)] = False
        return np.flatnonzero(keep)

    def labels(self) -> list[str]:
        out = [f"b{n}" for n in range(self.N + 1)] + [f"f{n}" for n in range(self.N + 1)]
        if self.extended:
            out.append("chi")
        return out

    def energies(self) -> np.ndarray:
        """``eps_0 .. eps_{N+1}`` as floats."""
        return np.array([float(eps(self.seq, n)) for n in range(self.N + 2)])


@dataclass(frozen=True)
class TruncatedOperator:
    matrix: np.ndarray
    layout: SpaceLayout
    edge: tuple[int, ...]

    def __post_init__(self):
        self.matrix.setflags(write=False)

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            return TruncatedOperator(self.matrix @ other.matrix, self.layout,
                                     tuple(sorted(set(self.edge) | set(other.edge))))
        return self.matrix @ other

    @property
    def H(self) -> "TruncatedOperator":
        return TruncatedOperator(self.matrix.conj().T.copy(), self.layout, self.edge)

    def retained_block(self) -> np.ndarray:
        keep = [i for i in range(self.layout.dim) if i not in self.edge]
        return self.matrix[np.ix_(keep, keep)]


def build_layout(seq: EnergySequence, N: int, extended: bool = False) -> SpaceLayout:
    """Layout with ``N + 1`` levels per sector (``N >= 2``)."""
    if int(N) != N or N < 2:
        raise ValueError("truncation N must be an integer >= 2")
    if seq.kind == "table" and len(seq) < N + 2:
        raise ValueError(f"table sequence needs at least N + 2 = {N + 2} values")
    return SpaceLayout(seq, int(N), bool(extended))


@dataclass(frozen=True)
class LadderBundle:
    """All shift operators on one layout.

    ``at_f``/``at_f_dag`` act on the fermionic sector enlarged by ``chi``;
    they, ``P_H`` and the tilde operators are ``None`` on plain layouts.
    """

    layout: SpaceLayout
    A: TruncatedOperator
    A_dag: TruncatedOperator
    a_b: TruncatedOperator
    a_b_dag: TruncatedOperator
    a_f: TruncatedOperator
    a_f_dag: TruncatedOperator
    Q: TruncatedOperator
    Q_dag: TruncatedOperator
    at_f: TruncatedOperator | None = None
    at_f_dag: TruncatedOperator | None = None
    P_H: TruncatedOperator | None = None
    calA_tilde: TruncatedOperator | None = None
    calA_tilde_dag: TruncatedOperator | None = None
    calA_susy: TruncatedOperator | None = None
    calA_susy_dag: TruncatedOperator | None = None


def ladder_matrices(layout: SpaceLayout) -> LadderBundle:
    N, dim = layout.N, layout.dim
    e = layout.energies()
    root = np.sqrt(e)
    edge = layout.edge

    def op(mat):
        return TruncatedOperator(mat, layout, edge)

    A = np.zeros((dim, dim), complex)
    a_b = np.zeros((dim, dim), complex)
    a_f = np.zeros((dim, dim), complex)
    for n in range(1, N + 1):
        A[layout.f(n - 1), layout.b(n)] = root[n]
        a_b[layout.b(n - 1), layout.b(n)] = root[n]
        a_f[layout.f(n - 1), layout.f(n)] = root[n + 1]
    # Q maps the bosonic sector into the fermionic one through A
    bundle = dict(
        layout=layout, A=op(A), A_dag=op(A.conj().T.copy()),
        a_b=op(a_b), a_b_dag=op(a_b.conj().T.copy()),
        a_f=op(a_f), a_f_dag=op(a_f.conj().T.copy()),
        Q=op(A.copy()), Q_dag=op(A.conj().T.copy()),
    )
    if layout.extended:
        at_f = a_f.copy()
        at_f[layout.chi, layout.f(0)] = root[1]
        P = np.eye(dim, dtype=complex)
        P[layout.chi, layout.chi] = 0.0
        calA = a_b + at_f
        bundle.update(
            at_f=op(at_f), at_f_dag=op(at_f.conj().T.copy()), P_H=op(P),
            calA_tilde=op(calA), calA_tilde_dag=op(calA.conj().T.copy()),
            calA_susy=op(P @ calA @ P), calA_susy_dag=op(P @ calA.conj().T @ P),
        )
    return LadderBundle(**bundle)


def susy_hamiltonian(layout: SpaceLayout, bundle: LadderBundle | None = None
                     ) -> TruncatedOperator:
    """``diag(A^dagger A, A A^dagger)`` on the layout."""
    bundle = bundle or ladder_matrices(layout)
    A = bundle.A.matrix
    H = bundle.A_dag.matrix @ A + A @ bundle.A_dag.matrix
    return TruncatedOperator(H, layout, layout.edge)


@dataclass(frozen=True)
class PsiBasis:
    """Columns ``Psi_0 = Phi^b_0`` and ``Psi_n = Phi^b_n + Phi^f_{n-1}``."""

    vectors: np.ndarray
    norms: np.ndarray

    def normalized(self) -> np.ndarray:
        return self.vectors / self.norms


def psi_basis(layout: SpaceLayout, tilde: bool = False) -> PsiBasis:
    """Psi vectors for ``n <= N``; ``tilde=True`` gives ``Psi~_n`` on an
    extended layout, with ``Psi~_0 = (Phi^b_0 + chi) / sqrt 2`` and
    ``Psi~_n = Psi_n / sqrt 2``."""
    if tilde and not layout.extended:
        raise ValueError("tilde vectors need an extended layout")
    V = np.zeros((layout.dim, layout.N + 1), complex)
    V[layout.b(0), 0] = 1.0
    for n in range(1, layout.N + 1):
        V[layout.b(n), n] = 1.0
        V[layout.f(n - 1), n] = 1.0
    if tilde:
        V[layout.chi, 0] = 1.0
        V /= np.sqrt(2.0)
    return PsiBasis(V, np.linalg.norm(V, axis=0))


def _max_abs(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def shift_relations(layout: SpaceLayout, tol: float = 1e-13) -> list[Check]:
    """Every shift relation of the truncated representation as a check list."""
    L = layout
    lad = ladder_matrices(L)
    e = L.energies()
    keep = L.retained
    blk = np.ix_(keep, keep)
    A, Ad = lad.A.matrix, lad.A_dag.matrix
    H = susy_hamiltonian(L, lad).matrix
    Hb = np.zeros((L.dim, L.dim), complex)
    Hf = np.zeros((L.dim, L.dim), complex)
    for n in range(L.N + 1):
        Hb[L.b(n), L.b(n)] = e[n]
        Hf[L.f(n), L.f(n)] = e[n + 1]
    ferm = [L.f(n) for n in range(L.N)]
    fblk = np.ix_(ferm, ferm)
    anchor = "shift operators"
    unit = np.eye(L.dim)

    def col(i):
        return unit[:, i]

    checks = [
        Check("A Phi^b_0 = 0", anchor, _max_abs(A @ col(L.b(0))), 0.0),
        Check("A Phi^b_n = sqrt(eps_n) Phi^f_{n-1}", anchor,
              max(_max_abs(A @ col(L.b(n)) - np.sqrt(e[n]) * col(L.f(n - 1)))
                  for n in range(1, L.N + 1)), tol),
        Check("A+ Phi^f_n = sqrt(eps_{n+1}) Phi^b_{n+1}", anchor,
              max(_max_abs(Ad @ col(L.f(n)) - np.sqrt(e[n + 1]) * col(L.b(n + 1)))
                  for n in range(L.N)), tol),
        Check("A+A = H^b", anchor, _max_abs(Ad @ A - Hb), tol),
        Check("AA+ = H^f on retained levels", anchor, _max_abs((A @ Ad - Hf)[fblk]), tol),
        Check("H^f A - A H^b = 0 off the edge", anchor,
              _max_abs((Hf @ A - A @ Hb)[blk]), tol),
        Check("a_b+ a_b = H^b", anchor,
              _max_abs(lad.a_b_dag.matrix @ lad.a_b.matrix - Hb), tol),
        Check("a_f+ a_f Phi^f_0 = 0", anchor,
              _max_abs(lad.a_f_dag.matrix @ lad.a_f.matrix @ col(L.f(0))), 0.0),
        Check("a_f+ a_f Phi^f_n = eps_{n+1} Phi^f_n, n >= 1", anchor,
              max(_max_abs(lad.a_f_dag.matrix @ lad.a_f.matrix @ col(L.f(n))
                           - e[n + 1] * col(L.f(n))) for n in range(1, L.N + 1)), tol),
        Check("H^SUSY = {Q+, Q}", "supercharges",
              _max_abs(H - (lad.Q_dag.matrix @ lad.Q.matrix + lad.Q.matrix @ lad.Q_dag.matrix)),
              0.0),
        Check("Q^2 = 0", "supercharges", _max_abs(lad.Q.matrix @ lad.Q.matrix), 0.0),
    ]
    basis = psi_basis(L)
    checks.append(Check(
        "H^SUSY Psi_n = eps_n Psi_n, n <= N-1", "Psi eigenvectors",
        max(_max_abs(H @ basis.vectors[:, n] - e[n] * basis.vectors[:, n]) for n in range(L.N)),
        tol))
    expected_norms = np.r_[1.0, np.full(L.N, np.sqrt(2.0))]
    checks.append(Check("|Psi_0| = 1, |Psi_n| = sqrt 2", "Psi eigenvectors",
                        _max_abs(basis.norms - expected_norms), 1e-14))
    gram = basis.vectors.conj().T @ basis.vectors
    checks.append(Check("Psi_n mutually orthogonal", "Psi eigenvectors",
                        _max_abs(gram - np.diag(np.diag(gram))), 1e-14))
    bos = H[: L.N + 1, : L.N + 1].real
    checks.append(Check("bosonic block spectrum = eps_0..eps_N", anchor,
                        _max_abs(eigvalsh(bos) - e[: L.N + 1]), 1e-12))

    if L.extended:
        at, atd, P = lad.at_f.matrix, lad.at_f_dag.matrix, lad.P_H.matrix
        chi = col(L.chi)
        checks += [
            Check("a~_f chi = 0", "extended space", _max_abs(at @ chi), 0.0),
            Check("a~_f Phi^f_0 = sqrt(eps_1) chi", "extended space",
                  _max_abs(at @ col(L.f(0)) - np.sqrt(e[1]) * chi), tol),
            Check("a~_f+ chi = sqrt(eps_1) Phi^f_0", "extended space",
                  _max_abs(atd @ chi - np.sqrt(e[1]) * col(L.f(0))), tol),
            Check("a_f = P a~_f P", "extended space", _max_abs(lad.a_f.matrix - P @ at @ P), 0.0),
            Check("a_f+ = P a~_f+ P = a~_f+ P", "extended space",
                  max(_max_abs(lad.a_f_dag.matrix - P @ atd @ P),
                      _max_abs(lad.a_f_dag.matrix - atd @ P)), 0.0),
            Check("a~_f+ a~_f P = AA+ on retained fermionic levels", "extended space",
                  _max_abs((atd @ at @ P - A @ Ad)[fblk]), tol),
            Check("a~_f+ a~_f Phi^f_0 = eps_1 Phi^f_0", "extended space",
                  _max_abs(atd @ at @ col(L.f(0)) - e[1] * col(L.f(0))), tol),
            Check("P^2 = P = P+", "extended space",
                  max(_max_abs(P @ P - P), _max_abs(P - P.conj().T)), 0.0),
            Check("P v = v - <chi, v> chi", "extended space",
                  _max_abs(P - (np.eye(L.dim) - np.outer(chi, chi.conj()))), 0.0),
        ]
        cA, cAd = lad.calA_susy.matrix, lad.calA_susy_dag.matrix
        checks += [
            Check("A_SUSY Phi^b_0 = 0 and Phi^b_n -> sqrt(eps_n) Phi^b_{n-1}", "extended shifts",
                  max(_max_abs(cA @ col(L.b(n)) - (np.sqrt(e[n]) * col(L.b(n - 1)) if n else 0))
                      for n in range(L.N + 1)), tol),
            Check("A_SUSY+ Phi^b_n = sqrt(eps_{n+1}) Phi^b_{n+1}, including n = 0",
                  "extended shifts",
                  max(_max_abs(cAd @ col(L.b(n)) - np.sqrt(e[n + 1]) * col(L.b(n + 1)))
                      for n in range(L.N)), tol,
                  note="the reference list starts at n = 1; n = 0 follows from a_b+"),
            Check("A_SUSY Phi^f_0 = 0 and Phi^f_n -> sqrt(eps_{n+1}) Phi^f_{n-1}",
                  "extended shifts",
                  max(_max_abs(cA @ col(L.f(n)) - (np.sqrt(e[n + 1]) * col(L.f(n - 1)) if n else 0))
                      for n in range(L.N + 1)), tol),
            Check("A_SUSY+ Phi^f_n = sqrt(eps_{n+2}) Phi^f_{n+1}", "extended shifts",
                  max(_max_abs(cAd @ col(L.f(n)) - np.sqrt(e[n + 2]) * col(L.f(n + 1)))
                      for n in range(L.N)), tol),
            Check("H^SUSY = P~ A~+ A~ P~ on retained levels", "extended shifts",
                  _max_abs((P @ lad.calA_tilde_dag.matrix @ lad.calA_tilde.matrix @ P - H)[blk]),
                  tol),
        ]
        tb = psi_basis(L, tilde=True).vectors
        checks += [
            Check("A~ Psi~_n = sqrt(eps_n) Psi~_{n-1}", "extended shifts",
                  max(_max_abs(lad.calA_tilde.matrix @ tb[:, n]
                               - (np.sqrt(e[n]) * tb[:, n - 1] if n else 0))
                      for n in range(L.N + 1)), tol),
            Check("A~+ Psi~_n = sqrt(eps_{n+1}) Psi~_{n+1}", "extended shifts",
                  max(_max_abs(lad.calA_tilde_dag.matrix @ tb[:, n] - np.sqrt(e[n + 1]) * tb[:, n + 1])
                      for n in range(L.N)), tol),
        ]
    return checks


def formal_annihilator_check(layout: SpaceLayout, tol: float = 1e-12) -> list[Check]:
    """Adjoint of the shift ``Psi_n -> sqrt(eps_n) Psi_{n-1}`` on span{Psi_n}.

    The adjoint reproduces ``eps_n`` on every ``Psi_n`` except ``n = 1``,
    where it yields ``eps_1 / 2``.
    """
    if layout.extended:
        raise ValueError("formal annihilator is defined on the plain layout")
    e = layout.energies()
    V = psi_basis(layout).vectors
    norms2 = np.sum(np.abs(V) ** 2, axis=0)
    calA = np.zeros((layout.dim, layout.dim), complex)
    for n in range(1, layout.N + 1):
        calA += np.sqrt(e[n]) * np.outer(V[:, n - 1], V[:, n].conj() / norms2[n])
    AdA = calA.conj().T @ calA
    anchor = "formal annihilator"

    def ratio(n):
        return (V[:, n].conj() @ AdA @ V[:, n]).real / norms2[n]

    eig_res = max(_max_abs(AdA @ V[:, n] - ratio(n) * V[:, n]) for n in range(layout.N + 1))
    others = [n for n in range(layout.N + 1) if n != 1]
    return [
        Check("A Psi_0 = 0", anchor, _max_abs(calA @ V[:, 0]), 0.0),
        Check("A Psi_n = sqrt(eps_n) Psi_{n-1}", anchor,
              max(_max_abs(calA @ V[:, n] - np.sqrt(e[n]) * V[:, n - 1])
                  for n in range(1, layout.N + 1)), tol),
        Check("Psi_n are eigenvectors of A+A", anchor, eig_res, tol),
        Check("A+A Psi_n = eps_n Psi_n, n != 1", anchor,
              max(abs(ratio(n) - e[n]) for n in others), tol),
        Check("A+A Psi_1 = (eps_1 / 2) Psi_1", anchor, abs(ratio(1) - e[1] / 2), tol),
        Check("A+A coincides with H^SUSY on span{Psi_n}", anchor,
              max(abs(ratio(n) - e[n]) for n in range(layout.N + 1)), tol,
              expect_hold=False,
              note="fails at n = 1 by eps_1 / 2; the reference sentence should read 'does not'"),
    ]


def export_matrix(op, path=None, precision: int = 17) -> str:
    """Dense row-major decimal text; complex entries written as ``re+imj``.

    Real-valued matrices are written with real entries only.
    """
    M = op.matrix if isinstance(op, TruncatedOperator) else np.asarray(op)
    real = np.all(M.imag == 0) if np.iscomplexobj(M) else True
    fmt = f"{{:.{precision}g}}"
    rows = []
    for row in M:
        if real:
            rows.append(" ".join(fmt.format(float(np.real(v))) for v in row))
        else:
            rows.append(" ".join(f"{fmt.format(v.real)}{'+' if v.imag >= 0 else '-'}"
                                 f"{fmt.format(abs(v.imag))}j" for v in row))
    text = "\n".join(rows) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
