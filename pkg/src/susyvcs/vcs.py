"""Vector coherent states built on a SUSY partner pair.

For ``z`` in the disc of radius ``sqrt(L)`` the state is

    |z> = N(|z|^2)^(-1/2) [ sum_n z^n / sqrt(eps_n!) Phi^b_n
                            + sum_n zbar^(n+1) / sqrt(eps_{n+1}!) Phi^f_n ]

with ``N = 1 + 2 sum_{n>=1} |z|^(2n) / eps_n!``. Frame operators are
computed by analytic angular integration (only equal phase frequencies
survive) combined with the radial moments of the measure.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .checks import Check
from .fock import SpaceLayout, build_layout, psi_basis
from .measures import RadialMeasure, landau_measure, log_moment, oscillator_measure, verify_moments
from .spectra import EnergySequence, eps_float, log_factorial

__all__ = [
    "DomainError",
    "NearBoundaryWarning",
    "VcsFamily",
    "CoeffVector",
    "FrameReport",
    "ExtendedFrameReport",
    "kernel_sum",
    "normalization",
    "coeffs",
    "state_vector",
    "overlap",
    "frame_operator",
    "extended_frame",
    "extended_norm2",
    "fqhe_frame",
]

SERIES_RTOL = 1e-15
MAX_TERMS = 2_000_000


class DomainError(ValueError):
    """Evaluation point outside the coherent-state domain."""


class NearBoundaryWarning(RuntimeWarning):
    """Series converge slowly close to the domain boundary."""


@dataclass(frozen=True)
class VcsFamily:
    """Sequence, truncation and radial measure of one coherent-state family.

    Unless ``validate=False`` the measure must reproduce ``eps_n!`` for
    ``n <= N + 1`` to ``moment_tol`` before the family is usable.
    """

    seq: EnergySequence
    N: int
    measure: RadialMeasure
    validate: bool = True
    moment_tol: float = 1e-8
    layout: SpaceLayout = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "layout", build_layout(self.seq, self.N))
        if self.validate:
            report = verify_moments(self.measure, self.seq, self.N + 1, self.moment_tol)
            if not report.passed:
                raise ValueError(
                    f"measure fails the moment test at n = {report.first_failure()} "
                    f"(max rel err {report.max_rel_err:.3e})")

    @classmethod
    def oscillator(cls, N: int = 40) -> "VcsFamily":
        return cls(EnergySequence.oscillator(), N, oscillator_measure())

    @classmethod
    def landau(cls, m: int, N: int = 40) -> "VcsFamily":
        return cls(EnergySequence.landau_bosonic(m), N, landau_measure(m))

    @property
    def domain_radius(self) -> float:
        return self.seq.radius

    def check_domain(self, z: complex) -> None:
        r = abs(z)
        if not r < self.domain_radius:
            raise DomainError(f"|z| = {r:.6g} is outside the disc of radius "
                              f"{self.domain_radius:.6g}")
        if r > 0.95 * self.domain_radius:
            warnings.warn(f"|z| = {r:.6g} is within 5% of the domain boundary; "
                          "series converge slowly", NearBoundaryWarning, stacklevel=3)

    @cached_property
    def _log_fact(self) -> np.ndarray:
        return np.array([log_factorial(self.seq, n) for n in range(self.N + 2)])


def kernel_sum(seq: EnergySequence, w: complex, start: int = 0,
               rtol: float = SERIES_RTOL) -> tuple[complex, float]:
    """``sum_{n >= start} w^n / eps_n!`` and a bound on the neglected tail.

    The tail after term ``n`` is bounded geometrically by
    ``|t_{n+1}| / (1 - |w| / eps_{n+2})``, valid because ``eps`` is
    nondecreasing. Table sequences are summed over their full length.
    """
    finite = seq.kind == "table"
    n_end = len(seq) - 1 if finite else None
    aw = abs(w)
    term = 1.0 + 0j
    total = 0j
    n = 0
    while True:
        if n >= start:
            total += term
        if finite and n == n_end:
            return total, 0.0
        nxt = term * w / eps_float(seq, n + 1)
        if n >= start:
            e2 = eps_float(seq, n + 2) if not (finite and n + 2 > n_end) else math.inf
            rho = aw / e2
            if rho < 1.0:
                bound = abs(nxt) / (1.0 - rho)
                if bound <= rtol * abs(total) or bound == 0.0:
                    return total, bound
        term = nxt
        n += 1
        if n > MAX_TERMS:
            raise DomainError("coherent-state series did not converge")


def normalization(family: VcsFamily, z: complex) -> float:
    """``N(|z|^2) = 1 + 2 sum_{n>=1} |z|^(2n) / eps_n!``."""
    family.check_domain(z)
    s, _ = kernel_sum(family.seq, abs(z) ** 2, start=1)
    return 1.0 + 2.0 * s.real


@dataclass(frozen=True)
class CoeffVector:
    """Unnormalized coefficients: ``bosonic[n] = z^n / sqrt(eps_n!)`` for
    ``n <= N`` and ``fermionic[n] = zbar^(n+1) / sqrt(eps_{n+1}!)`` for
    ``n <= N - 1``."""

    z: complex
    bosonic: np.ndarray
    fermionic: np.ndarray
    tail_bound: float
    normalization: float

    def as_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "normalization": self.normalization,
            "coeff_norms": {
                "bosonic": float(np.sum(np.abs(self.bosonic) ** 2)),
                "fermionic": float(np.sum(np.abs(self.fermionic) ** 2)),
            },
            "tail_bound": self.tail_bound,
        }


def _raw_coeffs(family: VcsFamily, z: complex) -> tuple[np.ndarray, np.ndarray]:
    N = family.N
    lf = family._log_fact
    n = np.arange(N + 1)
    if z == 0:
        bos = (n == 0).astype(complex)
        return bos, np.zeros(N, complex)
    logr, phase = math.log(abs(z)), cmath.phase(z)
    bos = np.exp(n * logr - 0.5 * lf[: N + 1] + 1j * n * phase)
    k = np.arange(1, N + 1)
    ferm = np.exp(k * logr - 0.5 * lf[1: N + 1] - 1j * k * phase)
    return bos, ferm


def coeffs(family: VcsFamily, z: complex) -> CoeffVector:
    z = complex(z)
    norm = normalization(family, z)
    bos, ferm = _raw_coeffs(family, z)
    tail, bound = kernel_sum(family.seq, abs(z) ** 2, start=family.N + 1)
    # both sectors lose the same tail: n > N bosonic and n > N fermionic powers
    return CoeffVector(z, bos, ferm, float(2.0 * (tail.real + bound)), norm)


def state_vector(family: VcsFamily, z: complex, normalized: bool = True) -> np.ndarray:
    """Truncated state on the plain layout (``N^(-1/2)`` included if asked)."""
    z = complex(z)
    L = family.layout
    bos, ferm = _raw_coeffs(family, z)
    v = np.zeros(L.dim, complex)
    v[: L.N + 1] = bos
    v[L.N + 1: L.N + 1 + L.N] = ferm
    if normalized:
        v /= math.sqrt(normalization(family, z))
    return v


def overlap(family: VcsFamily, z1: complex, z2: complex) -> complex:
    """``<z1|z2>`` from the full series (no truncation at ``N``)."""
    z1, z2 = complex(z1), complex(z2)
    n1, n2 = normalization(family, z1), normalization(family, z2)
    a, _ = kernel_sum(family.seq, z1.conjugate() * z2)
    b, _ = kernel_sum(family.seq, z1 * z2.conjugate(), start=1)
    return (a + b) / math.sqrt(n1 * n2)


# ---------------------------------------------------------------------------
# frame operators

@dataclass
class FrameReport:
    matrix: np.ndarray
    interior: np.ndarray
    method: str

    @property
    def deviation(self) -> float:
        """``max |F - I|`` over interior indices."""
        idx = np.ix_(self.interior, self.interior)
        return float(np.max(np.abs(self.matrix[idx] - np.eye(len(self.interior)))))

    def diagonal_deviation(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)) - 1.0

    def to_csv(self, path=None, labels=None, only_nonzero: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "value", "deviation"])
        M = self.matrix
        for i in range(M.shape[0]):
            for j in range(M.shape[1]):
                dev = M[i, j] - (1.0 if i == j else 0.0)
                if only_nonzero and M[i, j] == 0 and i != j:
                    continue
                r = labels[i] if labels else i
                c = labels[j] if labels else j
                w.writerow([r, c, repr(float(M[i, j].real)), repr(float(abs(dev)))])
        if path is not None:
            Path(path).write_text(buf.getvalue())
        return buf.getvalue()


@dataclass(frozen=True)
class _Slots:
    """Per basis slot: coefficient ``c r^p exp(i f theta) / sqrt(eps_p!)``."""

    scale: np.ndarray
    power: np.ndarray
    freq: np.ndarray


def _plain_slots(L: SpaceLayout) -> _Slots:
    N = L.N
    scale = np.ones(L.susy_dim)
    power = np.zeros(L.susy_dim, int)
    freq = np.zeros(L.susy_dim, int)
    for n in range(N + 1):
        power[L.b(n)] = n
        freq[L.b(n)] = n
    for n in range(N + 1):
        power[L.f(n)] = n + 1
        freq[L.f(n)] = -(n + 1)
    scale[L.f(N)] = 0.0  # fermionic top level carries no coefficient
    return _Slots(scale, power, freq)


def _angular_frame(family: VcsFamily, slots: _Slots) -> np.ndarray:
    """``int c_j conj(c_k) dlambda dtheta`` with the theta integral done exactly."""
    lf = np.array([log_factorial(family.seq, p) for p in range(int(slots.power.max()) + 1)])
    lm = {}
    dim = slots.scale.size
    F = np.zeros((dim, dim), complex)
    for j in range(dim):
        for k in range(dim):
            if slots.freq[j] != slots.freq[k] or slots.scale[j] == 0 or slots.scale[k] == 0:
                continue
            pj, pk = slots.power[j], slots.power[k]
            s = (pj + pk) // 2
            if s not in lm:
                lm[s] = log_moment(family.measure, s)
            F[j, k] = slots.scale[j] * slots.scale[k] * math.exp(
                lm[s] - 0.5 * (lf[pj] + lf[pk]))
    return F


def _quadrature_frame(family: VcsFamily, slots: _Slots, n_radial: int | None = None,
                      n_theta: int | None = None) -> np.ndarray:
    """Full two-dimensional quadrature of ``sum |v(z)><v(z)|`` over the measure.

    ``v`` is the unnormalized coefficient vector, so ``N(|z|^2)`` cancels
    against the frame weight (and boundary atoms stay finite).
    """
    pmax = int(slots.power.max())
    n_radial = n_radial or pmax + 8
    n_theta = n_theta or 4 * pmax + 8
    r, wr = family.measure.radial_quadrature(n_radial)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    wt = 2 * np.pi / n_theta
    lf = np.array([log_factorial(family.seq, p) for p in range(pmax + 1)])
    amp = slots.scale / np.exp(0.5 * lf[slots.power])
    rr = r[:, None] ** slots.power[None, :]  # (n_r, dim)
    ph = np.exp(1j * theta[:, None] * slots.freq[None, :])  # (n_t, dim)
    V = (rr[:, None, :] * ph[None, :, :] * amp).reshape(-1, slots.scale.size)
    W = np.repeat(wr, n_theta) * wt
    return (V.T * W) @ V.conj()


def frame_operator(family: VcsFamily, method: str = "angular", **kw) -> FrameReport:
    """Frame operator on the plain layout.

    ``method="angular"`` uses the exact angular reduction with radial
    moments; ``method="quadrature"`` integrates numerically over the disc
    (``N <= 10``).
    """
    L = family.layout
    slots = _plain_slots(L)
    if method == "angular":
        F = _angular_frame(family, slots)
    elif method == "quadrature":
        if L.N > 10:
            raise ValueError("2D quadrature cross-check is limited to N <= 10")
        F = _quadrature_frame(family, slots, **kw)
    else:
        raise ValueError(f"unknown frame method {method!r}")
    interior = np.array([L.b(n) for n in range(L.N)] + [L.f(n) for n in range(L.N)])
    return FrameReport(F, interior, method)


# ---------------------------------------------------------------------------
# extended space

CONVENTIONS = ("normalized", "literal")


def _extended_slots(L: SpaceLayout, convention: str) -> _Slots:
    base = _plain_slots(L)
    scale = np.append(base.scale, 1.0)
    power = np.append(base.power, 0)
    freq = np.append(base.freq, 0)
    if convention == "literal":
        scale[: L.susy_dim] /= math.sqrt(2.0)
    scale[L.b(0)] = 1.0 / math.sqrt(2.0)
    scale[L.chi] = 1.0 / math.sqrt(2.0)
    return _Slots(scale, power, freq)


def extended_norm2(family: VcsFamily, z: complex, convention: str = "normalized") -> float:
    """Squared norm of the extended state divided by the plain ``N(|z|^2)``.

    ``Psi~_0`` contributes 1 and each ``Psi~_n`` (``n >= 1``) contributes
    ``w |z|^(2n) / eps_n!`` with ``w = 2`` (normalized) or ``w = 1`` (literal).
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    family.check_domain(z)
    s, _ = kernel_sum(family.seq, abs(z) ** 2, start=1)
    weight = 2.0 if convention == "normalized" else 1.0
    return (1.0 + weight * s.real) / (1.0 + 2.0 * s.real)


def _extended_state(family: VcsFamily, z: complex, convention: str) -> np.ndarray:
    L = build_layout(family.seq, family.N, extended=True)
    slots = _extended_slots(L, convention)
    plain = state_vector(family, z, normalized=False)
    v = np.zeros(L.dim, complex)
    v[: L.susy_dim] = plain
    v *= slots.scale
    v[L.chi] = slots.scale[L.chi]
    return v / math.sqrt(normalization(family, z))


@dataclass
class ExtendedFrameReport:
    S: np.ndarray
    layout: SpaceLayout
    convention: str
    checks: list[Check]

    def check(self, name_start: str) -> Check:
        for c in self.checks:
            if c.name.startswith(name_start):
                return c
        raise KeyError(name_start)


def extended_frame(family: VcsFamily, convention: str = "normalized",
                   sample_points=None, tol: float = 1e-8) -> ExtendedFrameReport:
    """Frame operator of the extended coherent states and its properties.

    ``convention="normalized"`` keeps the per-level weights of the plain
    family, so every extended state has unit norm with the plain
    normalization; ``"literal"`` applies ``1/sqrt 2`` to every ``Psi_n``
    and yields norm ``(N + 1) / (2 N)``.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    L = build_layout(family.seq, family.N, extended=True)
    S = _angular_frame(family, _extended_slots(L, convention))
    interior = [i for i in range(L.dim) if i not in L.edge]
    blk = np.ix_(interior, interior)
    Si = S[blk]
    tb = psi_basis(L, tilde=True).vectors[:, : L.N]
    v = np.zeros(L.dim, complex)
    v[L.b(0)], v[L.chi] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    anchor = "extended coherent states"
    literal = convention == "literal"

    if sample_points is None:
        rad = family.domain_radius
        base = 0.5 if math.isinf(rad) else 0.4 * rad
        sample_points = [base * cmath.exp(1j * a) * s
                         for a, s in [(0.0, 1.0), (1.1, 0.6), (2.5, 0.9), (4.0, 0.3)]]
    alphas, resid = [], []
    for z in sample_points:
        ext = _extended_state(family, z, convention)
        proj = ext[: L.susy_dim]
        plain = state_vector(family, z)[: L.susy_dim]
        a = np.vdot(plain, proj) / np.vdot(plain, plain)
        alphas.append(a)
        resid.append(np.linalg.norm(proj - a * plain) / np.linalg.norm(proj))
    alphas = np.array(alphas)
    proj_metric = float(max(max(resid), np.max(np.abs(alphas - alphas[0])) / abs(alphas[0])))
    norm_dev = max(abs(extended_norm2(family, z, convention) - 1.0) for z in sample_points)

    checks = [
        Check("S is an orthogonal projector (|S^2 - S|)", anchor,
              float(np.max(np.abs(Si @ Si - Si))), tol, expect_hold=not literal,
              note="fails when each Psi~_n carries 1/sqrt 2" if literal else ""),
        Check("S = I on span{Psi~_n}", anchor,
              float(np.max(np.abs(S @ tb - tb))), tol, expect_hold=not literal,
              note="S Psi~_n = Psi~_n / 2 for n >= 1 under the literal weights" if literal else ""),
        Check("S v = 0 for v = (Phi^b_0 - chi)/sqrt 2", anchor,
              float(np.max(np.abs(S @ v))), tol),
        Check("S = I on the whole extended space", anchor,
              float(np.max(np.abs(Si - np.eye(len(interior))))), tol, expect_hold=False,
              note="S misses the direction (Phi^b_0 - chi)/sqrt 2"),
        Check("projection of the extended state is proportional to |z>", anchor,
              proj_metric, tol, expect_hold=literal,
              note="" if literal else "the Phi^b_0 component is scaled by 1/sqrt 2 only"),
        Check("extended states are normalized with the plain N", anchor,
              norm_dev, tol, expect_hold=not literal,
              note="norm^2 = (N + 1) / (2N)" if literal else ""),
    ]
    return ExtendedFrameReport(S, L, convention, checks)


# ---------------------------------------------------------------------------
# degenerate oscillator levels

@dataclass
class FqheReport:
    matrix: np.ndarray
    interior: np.ndarray
    K: int
    N: int

    @property
    def deviation(self) -> float:
        idx = np.ix_(self.interior, self.interior)
        return float(np.max(np.abs(self.matrix[idx] - np.eye(len(self.interior)))))

    @property
    def cross_k(self) -> float:
        """Largest entry coupling different degeneracy labels."""
        d = 2 * (self.N + 1)
        M = self.matrix.copy()
        for k in range(self.K):
            M[k * d:(k + 1) * d, k * d:(k + 1) * d] = 0
        return float(np.max(np.abs(M)))


def fqhe_frame(N: int, K: int, method: str = "angular") -> FqheReport:
    """``sum_k int |z;k><z;k| N exp(-|z|^2) dx dy / pi`` on ``n <= N``,
    ``k < K``, basis ordered by ``k`` then the plain layout."""
    if N < 2 or K < 1:
        raise ValueError("need N >= 2 and K >= 1")
    fam = VcsFamily.oscillator(N)
    L = fam.layout
    d = L.dim
    if method == "angular":
        block = _angular_frame(fam, _plain_slots(L))
    elif method == "quadrature":
        block = _quadrature_frame(fam, _plain_slots(L))
    else:
        raise ValueError(f"unknown frame method {method!r}")
    # |z;k> = v(z) (x) e_k, so the k-sum is a sum of embedded copies
    F = np.zeros((K * d, K * d), complex)
    for k in range(K):
        e_k = np.zeros((K, 1))
        e_k[k] = 1.0
        F += np.kron(e_k @ e_k.T, block)
    inner = [L.b(n) for n in range(N)] + [L.f(n) for n in range(N)]
    interior = np.array([k * d + i for k in range(K) for i in inner])
    return FqheReport(F, interior, K, N)
