"""Landau-type examples: the ``kappa / x`` superpotential and the quartic one.

The ``kappa = -1`` partners separate into hydrogen-like radial problems on a
half line with coupling ``m`` (``l = 0`` for the bosonic partner, ``l = 1``
for the fermionic one), shifted by ``m^2 / 2``.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy as sp
from scipy.linalg import eigh_tridiagonal

from .checks import Check
from .superpotentials import BUILTIN_SPECS, build_operators, hamiltonians, inverse_x_spec
from .vcs import DomainError, VcsFamily, kernel_sum
from .spectra import EnergySequence

__all__ = [
    "LandauSector",
    "RadialProblem",
    "RadialSolution",
    "GridFunction",
    "GridTooCoarseWarning",
    "separate",
    "solve_radial",
    "closed_radial_energy",
    "closed_spectrum",
    "spectrum_rows",
    "spectrum_csv",
    "convergence_ratios",
    "ground_state_residual",
    "GroundResidual",
    "normalization_closed_form",
    "normalization_printed",
    "landau_normalization",
    "NormalizationReport",
    "landau_vcs_family",
    "quartic_ground_residual",
    "residual_csv",
    "landau_checks",
]

HALFLINES = ("positive", "negative")


class GridTooCoarseWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class LandauSector:
    """Quantum numbers of one separated sector (``p_y`` magnitude ``m``,
    strip label ``j``) on one half line."""

    m: int
    j: int = 0
    halfline: str = "positive"
    kappa: int = -1

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")
        if int(self.j) != self.j:
            raise ValueError("j must be an integer")
        if self.halfline not in HALFLINES:
            raise ValueError(f"halfline must be one of {HALFLINES}")
        if self.kappa != -1:
            raise ValueError("only kappa = -1 separates into hydrogen-like problems")

    @property
    def y_window(self) -> tuple[float, float]:
        return 2 * math.pi * self.j, 2 * math.pi * (self.j + 1)


def default_grid(m: int) -> tuple[float, float]:
    """``(h, x_max)`` resolving the three lowest levels to well under 0.5%."""
    return 5e-4 * max(1.0, 1.0 / m), 60.0 / m


@dataclass(frozen=True)
class RadialProblem:
    """``-1/2 u'' - m/|x| u + l(l+1)/(2 x^2) u = E u`` with Dirichlet ends.

    Nodes are ``h, 2h, ..., < x_max`` (mirrored for the negative half line).
    """

    ell: int
    m: int
    h: float
    x_max: float
    halfline: str = "positive"

    def __post_init__(self):
        if self.ell not in (0, 1):
            raise ValueError("ell must be 0 or 1")
        if not (self.h > 0 and self.x_max > 4 * self.h):
            raise ValueError("grid needs h > 0 and several nodes below x_max")
        if self.halfline not in HALFLINES:
            raise ValueError(f"halfline must be one of {HALFLINES}")

    @property
    def nodes(self) -> np.ndarray:
        n = int(round(self.x_max / self.h)) - 1
        x = self.h * np.arange(1, n + 1)
        return x if self.halfline == "positive" else -x

    def potential(self, x) -> np.ndarray:
        ax = np.abs(np.asarray(x, dtype=float))
        return -self.m / ax + self.ell * (self.ell + 1) / (2.0 * ax ** 2)

    @property
    def offset(self) -> float:
        """Add to a radial eigenvalue to get the partner energy."""
        return self.m ** 2 / 2.0

    def structure(self) -> tuple:
        """Everything that determines the discretized operator."""
        return (self.ell, self.m, self.h, self.x_max)


def separate(sector: LandauSector, h: float | None = None, x_max: float | None = None
             ) -> dict[str, RadialProblem]:
    """Radial problems of the two partners: ``fermionic`` (``l = 1``) and
    ``bosonic`` (``l = 0``). The strip label ``j`` drops out."""
    h0, x0 = default_grid(sector.m)
    h = h0 if h is None else h
    x_max = x0 if x_max is None else x_max
    return {
        "fermionic": RadialProblem(1, sector.m, h, x_max, sector.halfline),
        "bosonic": RadialProblem(0, sector.m, h, x_max, sector.halfline),
    }


@dataclass(frozen=True)
class RadialSolution:
    problem: RadialProblem
    E: np.ndarray
    vectors: np.ndarray

    @property
    def energies(self) -> np.ndarray:
        return self.E + self.problem.offset


def solve_radial(problem: RadialProblem, k: int = 3) -> RadialSolution:
    """Lowest ``k`` eigenpairs of the three-point discretization.

    Eigenvectors are normalized so that ``h * sum |u|^2 = 1``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    x = problem.nodes
    if problem.h > 1.0 / (200 * problem.m) or abs(x[-1]) < 60.0 / problem.m - 2 * problem.h:
        warnings.warn("radial grid is outside the recommended resolution "
                      f"(h <= 1/(200 m), x_max >= 60/m) for m = {problem.m}",
                      GridTooCoarseWarning, stacklevel=2)
    h2 = problem.h ** 2
    diag = 1.0 / h2 + problem.potential(x)
    off = np.full(x.size - 1, -0.5 / h2)
    E, V = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    V = V / math.sqrt(problem.h)
    ground = np.abs(V[:, 0])
    if np.count_nonzero(ground > 0.5 * ground.max()) < 20:
        warnings.warn("lowest eigenvector is resolved by fewer than 20 nodes above half "
                      "maximum", GridTooCoarseWarning, stacklevel=2)
    return RadialSolution(problem, E, V)


def closed_radial_energy(m: int, ell: int, n: int) -> Fraction:
    """Hydrogen-like level ``-m^2 / (2 (n + l + 1)^2)``."""
    return Fraction(-m * m, 2 * (n + ell + 1) ** 2)


def closed_spectrum(sector: LandauSector, n: int, which: str) -> Fraction:
    """Exact partner energy: ``m^2/2 (1 - 1/(n+1)^2)`` (bosonic) or
    ``m^2/2 (1 - 1/(n+2)^2)`` (fermionic)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    ell = {"bosonic": 0, "fermionic": 1}.get(which)
    if ell is None:
        raise ValueError("which must be 'bosonic' or 'fermionic'")
    return Fraction(sector.m ** 2, 2) + closed_radial_energy(sector.m, ell, n)


def spectrum_rows(m: int, ell: int, k: int = 3, h: float | None = None,
                  x_max: float | None = None) -> list[dict]:
    """Numeric vs closed-form radial levels, ready for the spectrum CSV."""
    problems = separate(LandauSector(m), h, x_max)
    prob = problems["bosonic" if ell == 0 else "fermionic"]
    sol = solve_radial(prob, k)
    rows = []
    for n, E in enumerate(sol.E):
        exact = float(closed_radial_energy(m, ell, n))
        rows.append({"model": "landau", "m": m, "ell": ell, "n": n,
                     "E_numeric": float(E), "E_closed": exact,
                     "rel_err": float(abs(E - exact) / abs(exact)),
                     "epsilon": float(E) + prob.offset})
    return rows


SPECTRUM_COLUMNS = ("model", "m", "ell", "n", "E_numeric", "E_closed", "rel_err", "epsilon")


def spectrum_csv(rows, path=None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SPECTRUM_COLUMNS, extrasaction="ignore",
                       lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def convergence_ratios(m: int, ell: int, h: float, k: int = 3,
                       x_max: float | None = None) -> np.ndarray:
    """Error ratio ``err(h) / err(h/2)`` for the ``k`` lowest levels."""
    x_max = default_grid(m)[1] if x_max is None else x_max
    errs = []
    for step in (h, h / 2):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GridTooCoarseWarning)
            sol = solve_radial(RadialProblem(ell, m, step, x_max), k)
        exact = np.array([float(closed_radial_energy(m, ell, n)) for n in range(k)])
        errs.append(np.abs(sol.E - exact))
    return errs[0] / errs[1]


# ---------------------------------------------------------------------------
# ground states


@dataclass(frozen=True)
class GridFunction:
    """Samples on a rectangular ``(x, y)`` grid."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid function has non-finite samples")

    def norm(self) -> float:
        inner = np.trapezoid(np.abs(self.values) ** 2, self.y, axis=1)
        return float(math.sqrt(np.trapezoid(inner, self.x)))


_X, _Y = sp.symbols("x y", real=True)


def _sample(expr, window, samples) -> GridFunction:
    (x0, x1), (y0, y1) = window
    if not (x1 > x0 and y1 > y0):
        raise ValueError("window has zero measure")
    x = np.linspace(x0, x1, samples[0])
    y = np.linspace(y0, y1, samples[1])
    f = sp.lambdify((_X, _Y), expr, "numpy")
    vals = np.broadcast_to(np.asarray(f(x[:, None], y[None, :]), dtype=complex),
                           (x.size, y.size))
    return GridFunction(x, y, np.array(vals))


def landau_ground_state(sector: LandauSector, decay_scale: float = 1.0):
    """``|x| exp(-s m |x|) chi_{jm}`` on the sector's half line, as sympy."""
    s = sp.nsimplify(decay_scale)
    sign = 1 if sector.halfline == "positive" else -1
    ax = sign * _X
    chi = sp.exp(-sp.I * sign * sector.m * _Y) / sp.sqrt(2 * sp.pi)
    return ax * sp.exp(-s * sector.m * ax) * chi


@dataclass(frozen=True)
class GroundResidual:
    annihilator: float
    hamiltonian: float
    window: tuple


def ground_state_residual(sector: LandauSector, window=None, samples=(801, 201),
                          decay_scale: float = 1.0) -> GroundResidual:
    """``|A Psi| / |Psi|`` and ``|H^b Psi| / |Psi|`` for the closed-form state.

    ``A`` is the first-order ladder operator annihilating the bosonic ground
    state; both operators act through exact symbolic differentiation and the
    norms use the trapezoid rule on the window. ``window`` defaults to
    ``[0.01, 30/m]`` on the half line times the ``j``-th strip.
    """
    if window is None:
        lo, hi = 0.01, 30.0 / sector.m
        xs = (lo, hi) if sector.halfline == "positive" else (-hi, -lo)
        window = (xs, sector.y_window)
    (x0, x1), _ = window
    if x0 <= 0 <= x1:
        raise ValueError("window must exclude x = 0")
    spec = inverse_x_spec(sector.kappa)
    ops = build_operators(spec)
    # the bosonic partner is e e^dagger here, so A is e^dagger
    A = ops.e_dag
    H_b = hamiltonians(spec)["h_f"]
    psi = landau_ground_state(sector, decay_scale)
    norm = _sample(psi, window, samples).norm()
    a_res = _sample(sp.simplify(A.apply_sympy(psi, _X, _Y)), window, samples).norm()
    h_res = _sample(sp.simplify(H_b.apply_sympy(psi, _X, _Y)), window, samples).norm()
    return GroundResidual(a_res / norm, h_res / norm, window)


def quartic_ground_residual(k: int, window=((-2.0, 2.0), (0.0, 2 * math.pi)),
                            samples=(201, 101), cubic_denominator: int = 6) -> float:
    """``max |h^b psi_0| / |psi_0|`` over the window for
    ``psi_0 = exp(-k x + i k y - x^3 / c)``; ``c = 6`` is the true ground state."""
    spec = BUILTIN_SPECS["quartic"]
    h_b = hamiltonians(spec)["h_b"]
    psi = sp.exp(-k * _X + sp.I * k * _Y - _X ** 3 / cubic_denominator) / sp.sqrt(2 * sp.pi)
    ratio = sp.simplify(h_b.apply_sympy(psi, _X, _Y) / psi)
    g = _sample(ratio, window, samples)
    return float(np.max(np.abs(g.values)))


RESIDUAL_COLUMNS = ("example", "k_or_m", "window", "residual")


def residual_csv(rows, path=None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=RESIDUAL_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({**r, "residual": repr(float(r["residual"]))})
    text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# normalization


def normalization_closed_form(u: float) -> float:
    """``3 + 4u/(1-u) + 4/u + 4 log(1-u)/u^2``, by power series below 1e-3."""
    if not 0 <= u < 1:
        raise DomainError("u must lie in [0, 1)")
    if u < 1e-3:
        # 1 + 2 sum_n 2 (n+1)/(n+2) u^n, first terms
        return 1.0 + sum(4.0 * (n + 1) / (n + 2) * u ** n for n in range(1, 8))
    return 3.0 + 4.0 * u / (1.0 - u) + 4.0 / u + 4.0 * math.log1p(-u) / u ** 2


def normalization_printed(u: float) -> float:
    """Reference expression ``4u/(1-u) - (u^2/4) log(1-u) - 3``."""
    if not 0 <= u < 1:
        raise DomainError("u must lie in [0, 1)")
    return 4.0 * u / (1.0 - u) - u * u / 4.0 * math.log1p(-u) - 3.0


@dataclass(frozen=True)
class NormalizationReport:
    m: int
    u: float
    series: float
    closed: float
    printed: float

    @property
    def rel_err(self) -> float:
        return abs(self.series - self.closed) / abs(self.closed)


def landau_normalization(m: int, u: float) -> NormalizationReport:
    """Series ``1 + 2 sum_{n>=1} |z|^(2n) / eps_n!`` at ``|z|^2 = u m^2 / 2``
    with both closed forms alongside."""
    if not 0 <= u < 1:
        raise DomainError("u must lie in [0, 1): the series converges for |z|^2 < m^2/2")
    seq = EnergySequence.landau_bosonic(m)
    s, _ = kernel_sum(seq, u * m * m / 2.0, start=1)
    return NormalizationReport(m, u, 1.0 + 2.0 * s.real, normalization_closed_form(u),
                               normalization_printed(u))


def landau_vcs_family(sector: LandauSector | int, N: int = 40) -> VcsFamily:
    m = sector.m if isinstance(sector, LandauSector) else int(sector)
    if N < 2:
        raise ValueError("N must be at least 2")
    return VcsFamily.landau(m, N)


def landau_checks(m_values=(1, 2), residual_tol: float = 1e-6) -> list[Check]:
    """Spectra, ground states and normalization for the report."""
    out = []
    for m in m_values:
        for ell in (0, 1):
            rows = spectrum_rows(m, ell, 3)
            worst = max(r["rel_err"] for r in rows)
            out.append(Check(f"radial spectrum m={m} l={ell}", "hydrogen-like radial levels",
                             worst, 5e-3))
    for m, j in ((1, 0), (1, -2), (3, 0), (3, -2)):
        r = ground_state_residual(LandauSector(m, j))
        out.append(Check(f"A Psi_0 = 0 (m={m}, j={j})", "Landau ground state",
                         r.annihilator, residual_tol))
        out.append(Check(f"H^b Psi_0 = 0 (m={m}, j={j})", "Landau ground state",
                         r.hamiltonian, residual_tol))
    for k in (1, -3):
        out.append(Check(f"quartic h^b psi_0 = 0 (k={k})", "quartic ground state",
                         quartic_ground_residual(k), 1e-8))
    worst = max(landau_normalization(1, u / 10).rel_err for u in range(1, 10))
    out.append(Check("normalization series = derived closed form", "Landau normalization",
                     worst, 1e-10))
    printed0 = normalization_printed(0.0)
    out.append(Check("reference normalization formula at u = 0 equals 1",
                     "Landau normalization", abs(printed0 - 1.0), 1e-10, expect_hold=False,
                     note=f"reference expression gives {printed0:g} at u = 0"))
    return out
