"""Holomorphic picture of the SUSY coherent states and its Grassmann form.

Functions on the disc are stored as raw monomial coefficients:
``f(z) = sum_n a_n z^n + sum_{n>=1} b_n zbar^n``. The unitary map sends
``Phi^b_n -> z^n / sqrt(eps_n!)`` and ``Phi^f_n -> zbar^(n+1) / sqrt(eps_{n+1}!)``.

Grassmann-valued quantities live in the four-dimensional algebra spanned by
``1, zeta, zetabar, zetabar zeta``; coefficients may be any objects that
support addition and the product passed to :meth:`GrassmannElement.mul`.
"""

from __future__ import annotations

import itertools
import math
import operator
from dataclasses import dataclass, field

import numpy as np

from .checks import Check
from .fock import SpaceLayout, susy_hamiltonian
from .measures import RadialMeasure, log_moment
from .spectra import eps_float, log_factorial
from .vcs import VcsFamily, normalization

__all__ = [
    "HolFunction",
    "GradedFunction",
    "GrassmannElement",
    "BerezinConvention",
    "w_map",
    "w_inverse",
    "w_matrix",
    "q_hol_action",
    "q_hol_dagger_action",
    "q_hol_matrices",
    "hol_inner",
    "hol_gram",
    "graded_scalar_product",
    "grassmann_vcs",
    "graded_frame",
    "convention_table",
    "hol_checks",
]


@dataclass(frozen=True)
class HolFunction:
    """``sum_{n<=N} a_n z^n + sum_{1<=n<=N+1} b_n zbar^n``.

    ``antianalytic[0]`` is always zero: the constant belongs to the
    analytic part.
    """

    analytic: np.ndarray
    antianalytic: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.analytic, dtype=complex)
        b = np.asarray(self.antianalytic, dtype=complex)
        if b.size != a.size + 1:
            raise ValueError("antianalytic part needs one more slot than the analytic part")
        if b[0] != 0:
            raise ValueError("the constant function lives in the analytic part only")
        object.__setattr__(self, "analytic", a)
        object.__setattr__(self, "antianalytic", b)

    @classmethod
    def zeros(cls, N: int) -> "HolFunction":
        return cls(np.zeros(N + 1, complex), np.zeros(N + 2, complex))

    @property
    def N(self) -> int:
        return self.analytic.size - 1

    def __add__(self, other: "HolFunction") -> "HolFunction":
        return HolFunction(self.analytic + other.analytic, self.antianalytic + other.antianalytic)

    def __sub__(self, other: "HolFunction") -> "HolFunction":
        return HolFunction(self.analytic - other.analytic, self.antianalytic - other.antianalytic)

    def __mul__(self, c) -> "HolFunction":
        return HolFunction(self.analytic * c, self.antianalytic * c)

    __rmul__ = __mul__

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        out = np.polynomial.polynomial.polyval(z, self.analytic)
        return out + np.polynomial.polynomial.polyval(zb, self.antianalytic)

    def allclose(self, other: "HolFunction", atol: float = 1e-12) -> bool:
        return (np.allclose(self.analytic, other.analytic, rtol=0, atol=atol)
                and np.allclose(self.antianalytic, other.antianalytic, rtol=0, atol=atol))


def _inv_sqrt_fact(layout_or_family, n_max: int) -> np.ndarray:
    seq = layout_or_family.seq
    return np.exp(-0.5 * np.array([log_factorial(seq, n) for n in range(n_max + 1)]))


def w_map(layout: SpaceLayout, vector) -> HolFunction:
    """Image of a plain-layout vector under the unitary map."""
    v = np.asarray(vector, dtype=complex)
    if v.shape != (layout.susy_dim,):
        raise ValueError(f"expected a vector of length {layout.susy_dim}")
    N = layout.N
    s = _inv_sqrt_fact(layout, N + 1)
    a = v[: N + 1] * s[: N + 1]
    b = np.zeros(N + 2, complex)
    b[1:] = v[N + 1:] * s[1:]
    return HolFunction(a, b)


def w_inverse(layout: SpaceLayout, f: HolFunction) -> np.ndarray:
    N = layout.N
    if f.N != N:
        raise ValueError("truncation mismatch")
    s = _inv_sqrt_fact(layout, N + 1)
    v = np.zeros(layout.susy_dim, complex)
    v[: N + 1] = f.analytic / s[: N + 1]
    v[N + 1:] = f.antianalytic[1:] / s[1:]
    return v


def _flatten(f: HolFunction) -> np.ndarray:
    return np.concatenate([f.analytic, f.antianalytic[1:]])


def _unflatten(x: np.ndarray, N: int) -> HolFunction:
    return HolFunction(x[: N + 1], np.concatenate([[0.0], x[N + 1:]]))


def w_matrix(layout: SpaceLayout) -> np.ndarray:
    """Matrix of the map in flattened coordinates ``(a_0..a_N, b_1..b_{N+1})``."""
    return np.column_stack([_flatten(w_map(layout, e)) for e in np.eye(layout.susy_dim)])


def q_hol_action(layout: SpaceLayout, f: HolFunction) -> HolFunction:
    """``z^n -> sqrt(eps_n) zbar^n`` (``n >= 1``); kills constants and zbar^n."""
    N = layout.N
    out = HolFunction.zeros(N)
    b = out.antianalytic.copy()
    for n in range(1, N + 1):
        b[n] = math.sqrt(eps_float(layout.seq, n)) * f.analytic[n]
    return HolFunction(out.analytic, b)


def q_hol_dagger_action(layout: SpaceLayout, f: HolFunction) -> HolFunction:
    """``zbar^n -> sqrt(eps_n) z^n``; kills analytic input. ``zbar^(N+1)``
    leaves the truncated space."""
    N = layout.N
    a = np.zeros(N + 1, complex)
    for n in range(1, N + 1):
        a[n] = math.sqrt(eps_float(layout.seq, n)) * f.antianalytic[n]
    return HolFunction(a, np.zeros(N + 2, complex))


def q_hol_matrices(layout: SpaceLayout) -> tuple[np.ndarray, np.ndarray]:
    """``Q_hol`` and ``Q_hol^dagger`` in flattened coordinates, built column by
    column from the monomial rules."""
    dim = layout.susy_dim
    N = layout.N
    Q = np.zeros((dim, dim), complex)
    Qd = np.zeros((dim, dim), complex)
    for j, e in enumerate(np.eye(dim)):
        f = _unflatten(e, N)
        Q[:, j] = _flatten(q_hol_action(layout, f))
        Qd[:, j] = _flatten(q_hol_dagger_action(layout, f))
    return Q, Qd


def hol_inner(f: HolFunction, g: HolFunction, measure: RadialMeasure) -> complex:
    """``int conj(f) g dmu`` with the angle integrated exactly.

    Only equal phase frequencies survive, so analytic and antianalytic parts
    decouple and each monomial pair contributes the moment of its order.
    """
    if f.N != g.N:
        raise ValueError("truncation mismatch")
    mom = np.exp([log_moment(measure, n) for n in range(f.N + 2)])
    return complex(np.sum(np.conj(f.analytic) * g.analytic * mom[: f.N + 1])
                   + np.sum(np.conj(f.antianalytic) * g.antianalytic * mom))


def hol_gram(family: VcsFamily, method: str = "angular", n_radial: int | None = None
             ) -> np.ndarray:
    """Gram matrix of the images of ``Phi^b_n, Phi^f_n`` under the map."""
    L = family.layout
    images = [w_map(L, e) for e in np.eye(L.susy_dim)]
    if method == "angular":
        return np.array([[hol_inner(f, g, family.measure) for g in images] for f in images])
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    n_radial = n_radial or L.N + 10
    n_theta = 4 * L.N + 12
    r, wr = family.measure.radial_quadrature(n_radial)
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    w = (wr[:, None] * np.full(n_theta, 2 * np.pi / n_theta)[None, :]).ravel()
    V = np.array([f(z) for f in images])
    return (V.conj() * w) @ V.T


# ---------------------------------------------------------------------------
# graded functions


@dataclass(frozen=True)
class GradedFunction:
    """``body(z) + zeta soul(z)`` with analytic ``body`` and ``soul``.

    ``soul[0]`` must vanish (the soul excludes the constant function).
    """

    body: np.ndarray
    soul: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.body, dtype=complex)
        s = np.asarray(self.soul, dtype=complex)
        if b.shape != s.shape:
            raise ValueError("body and soul need the same truncation")
        if s[0] != 0:
            raise ValueError("soul must have zero constant term")
        object.__setattr__(self, "body", b)
        object.__setattr__(self, "soul", s)

    @property
    def N(self) -> int:
        return self.body.size - 1

    def __add__(self, other):
        return GradedFunction(self.body + other.body, self.soul + other.soul)

    def __mul__(self, other):
        """Truncated product; the ``zeta soul zeta soul`` term vanishes."""
        if not isinstance(other, GradedFunction):
            return GradedFunction(self.body * other, self.soul * other)
        N = self.N

        def conv(p, q):
            return np.convolve(p, q)[: N + 1]

        return GradedFunction(conv(self.body, other.body),
                              conv(self.body, other.soul) + conv(self.soul, other.body))

    __rmul__ = __mul__


@dataclass(frozen=True)
class BerezinConvention:
    """``integral``: which quadratic monomial integrates to +1
    (``"zetabar_zeta"`` or ``"zeta_zetabar"``).

    ``ordering``: ``"ket_bra"`` puts the Grassmann factor of the ket to the
    left of the one from the bra in ``|z,zeta><z,zeta|``; ``"bra_ket"``
    reverses it.
    """

    integral: str = "zetabar_zeta"
    ordering: str = "ket_bra"

    def __post_init__(self):
        if self.integral not in ("zetabar_zeta", "zeta_zetabar"):
            raise ValueError(f"unknown integral convention {self.integral!r}")
        if self.ordering not in ("ket_bra", "bra_ket"):
            raise ValueError(f"unknown ordering {self.ordering!r}")

    @property
    def top_sign(self) -> int:
        """Value of ``int zetabar zeta dzeta``."""
        return 1 if self.integral == "zetabar_zeta" else -1


_KEYS = ("one", "zeta", "zetabar", "top")  # top = zetabar zeta
# (left, right) -> (sign, key); missing pairs vanish
_TABLE = {
    ("one", "one"): (1, "one"),
    ("one", "zeta"): (1, "zeta"),
    ("one", "zetabar"): (1, "zetabar"),
    ("one", "top"): (1, "top"),
    ("zeta", "one"): (1, "zeta"),
    ("zetabar", "one"): (1, "zetabar"),
    ("top", "one"): (1, "top"),
    ("zetabar", "zeta"): (1, "top"),
    ("zeta", "zetabar"): (-1, "top"),
}


@dataclass(frozen=True)
class GrassmannElement:
    """``one + zeta*c_zeta + zetabar*c_zetabar + zetabar zeta*c_top``.

    Coefficients are even (commuting) objects.
    """

    terms: dict = field(default_factory=dict)

    @classmethod
    def of(cls, one=None, zeta=None, zetabar=None, top=None) -> "GrassmannElement":
        vals = dict(one=one, zeta=zeta, zetabar=zetabar, top=top)
        return cls({k: v for k, v in vals.items() if v is not None})

    def __getitem__(self, key):
        return self.terms.get(key, 0)

    def __add__(self, other):
        keys = set(self.terms) | set(other.terms)
        return GrassmannElement({k: self[k] + other[k] for k in keys})

    def scale(self, c) -> "GrassmannElement":
        return GrassmannElement({k: v * c for k, v in self.terms.items()})

    def mul(self, other: "GrassmannElement", op=operator.mul) -> "GrassmannElement":
        out: dict = {}
        for (ka, va), (kb, vb) in itertools.product(self.terms.items(), other.terms.items()):
            hit = _TABLE.get((ka, kb))
            if hit is None:
                continue
            sign, key = hit
            val = op(va, vb)
            val = val if sign == 1 else -val
            out[key] = out[key] + val if key in out else val
        return GrassmannElement(out)

    __mul__ = mul

    def berezin(self, convention: BerezinConvention):
        """Integrate over ``zeta``: only the top component survives."""
        return convention.top_sign * self["top"] if "top" in self.terms else 0


def graded_scalar_product(f: GradedFunction, g: GradedFunction, measure: RadialMeasure,
                          convention: BerezinConvention | None = None) -> complex:
    """``int conj(f) g [1 + zetabar zeta] dzeta dmu`` by Berezin reduction.

    The Grassmann algebra runs over sector labels (body/soul pairs); the
    surviving top coefficient selects which analytic inner products enter.
    """
    convention = convention or BerezinConvention()
    if f.N != g.N:
        raise ValueError("truncation mismatch")
    e_b, e_s = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    bra = GrassmannElement.of(one=e_b, zetabar=e_s)
    ket = GrassmannElement.of(one=e_b, zeta=e_s)
    weight = GrassmannElement.of(one=1.0, top=1.0)
    pair = bra.mul(ket, op=np.outer).mul(weight)
    sigma = pair.berezin(convention)
    if np.isscalar(sigma):
        return 0j

    def inner(p, q):
        zeros = np.zeros(p.size + 1)
        return hol_inner(HolFunction(p, zeros), HolFunction(q, zeros), measure)

    parts = {(0, 0): (f.body, g.body), (0, 1): (f.body, g.soul),
             (1, 0): (f.soul, g.body), (1, 1): (f.soul, g.soul)}
    return complex(sum(sigma[i, j] * inner(*parts[i, j]) for (i, j) in parts if sigma[i, j]))


def grassmann_vcs(family: VcsFamily, z: complex) -> GradedFunction:
    """``N^(-1/2) [xi_0 + (1 + zeta) sum_{n>=1} z^n / sqrt(eps_n!) xi_n]`` in
    raw monomial coefficients."""
    z = complex(z)
    norm = normalization(family, z)
    N = family.N
    lf = np.array([log_factorial(family.seq, n) for n in range(N + 1)])
    n = np.arange(N + 1)
    c = np.zeros(N + 1, complex)
    if z == 0:
        c[0] = 1.0
    else:
        c = np.exp(n * math.log(abs(z)) - lf + 1j * n * np.angle(z))
    c /= math.sqrt(norm)
    soul = c.copy()
    soul[0] = 0.0
    return GradedFunction(c, soul)


@dataclass
class GradedFrame:
    body: np.ndarray
    soul: np.ndarray
    sigma: np.ndarray
    convention: BerezinConvention

    def deviations(self, interior: int) -> tuple[float, float]:
        """``max |F - I|`` on body levels ``< interior`` and soul levels
        ``1 .. interior - 1``."""
        b = self.body[:interior, :interior]
        s = self.soul[1:interior, 1:interior]
        return (float(np.max(np.abs(b - np.eye(b.shape[0])))),
                float(np.max(np.abs(s - np.eye(s.shape[0])))))


def graded_frame(family: VcsFamily, convention: BerezinConvention | None = None) -> GradedFrame:
    """Frame operator of the graded states with weight ``N [zetabar zeta - 1]``.

    The ket is ``K0 + zeta K1`` and the bra ``K0^+ + zetabar K1^+``; the
    Grassmann product and Berezin integral are carried out on sector labels,
    and the remaining ``int K_i K_j^+ N dmu`` are diagonal in the
    orthonormal monomials with entries ``moment(n) / eps_n!``.
    """
    convention = convention or BerezinConvention()
    e0, e1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    ket = GrassmannElement.of(one=e0, zeta=e1)
    bra = GrassmannElement.of(one=e0, zetabar=e1)
    if convention.ordering == "ket_bra":
        pair = ket.mul(bra, op=np.outer)
    else:
        pair = bra.mul(ket, op=lambda a, b: np.outer(b, a))
    weight = GrassmannElement.of(one=-1.0, top=1.0)
    sigma = pair.mul(weight).berezin(convention)
    sigma = np.zeros((2, 2)) if np.isscalar(sigma) else sigma

    N = family.N
    diag = np.exp([log_moment(family.measure, n) - log_factorial(family.seq, n)
                   for n in range(N + 1)])
    body = sigma[0, 0] * np.diag(diag)
    soul_diag = diag.copy()
    soul_diag[0] = 0.0
    soul = sigma[1, 1] * np.diag(soul_diag)
    return GradedFrame(body, soul, sigma, convention)


def convention_table(family: VcsFamily, tol: float = 1e-8) -> list[dict]:
    """Sector-wise frame deviations under every convention combination."""
    rows = []
    for integral in ("zetabar_zeta", "zeta_zetabar"):
        for ordering in ("ket_bra", "bra_ket"):
            conv = BerezinConvention(integral, ordering)
            fr = graded_frame(family, conv)
            db, ds = fr.deviations(family.N)
            rows.append({"integral": integral, "ordering": ordering,
                         "body_deviation": db, "soul_deviation": ds,
                         "identity": bool(db < tol and ds < tol)})
    return rows


def hol_checks(family: VcsFamily, tol: float = 1e-12) -> list[Check]:
    """Supercharge algebra and unitarity in the holomorphic picture."""
    L = family.layout
    Q, Qd = q_hol_matrices(L)
    anchor = "holomorphic supercharges"
    Wm = w_matrix(L)
    H = susy_hamiltonian(L).matrix[: L.susy_dim, : L.susy_dim]
    H_hol = Wm @ H @ np.linalg.inv(Wm)
    anti = Qd @ Q + Q @ Qd
    gram = hol_gram(family)
    frame = graded_frame(family)
    db, ds = frame.deviations(family.N)
    table = convention_table(family)
    return [
        Check("Q_hol^2 = 0", anchor, float(np.max(np.abs(Q @ Q))), 0.0),
        Check("(Q_hol^+)^2 = 0", anchor, float(np.max(np.abs(Qd @ Qd))), 0.0),
        Check("{Q_hol^+, Q_hol} = W H^SUSY W^-1", anchor,
              float(np.max(np.abs(anti - H_hol))), tol),
        Check("unitary map: Gram matrix of images = I", "holomorphic map",
              float(np.max(np.abs(gram - np.eye(L.susy_dim)))), 1e-10),
        Check("graded frame = I on body sector", "Grassmann coherent states", db, 1e-8,
              note=f"convention {frame.convention.integral}/{frame.convention.ordering}"),
        Check("graded frame = I on soul sector", "Grassmann coherent states", ds, 1e-8,
              note=f"convention {frame.convention.integral}/{frame.convention.ordering}"),
        Check("conventions giving +I on both sectors", "Grassmann coherent states",
              float(sum(r["identity"] for r in table)), 1.0,
              note=", ".join(f"{r['integral']}/{r['ordering']}" for r in table if r["identity"])),
    ]
