"""Energy sequences of SUSY partner pairs and their generalized factorials.

Built-in sequences evaluate in exact rational arithmetic; conversion to float
happens only when a caller asks for it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "EnergySequence",
    "GroundStateProfile",
    "eps",
    "eps_float",
    "factorial",
    "log_factorial",
    "landau_factorial_closed_form",
    "landau_inverse_factorial",
    "partner_consistency",
    "ground_state_profiles",
    "SequenceIndexError",
]

KINDS = ("oscillator", "landau_bosonic", "landau_fermionic", "table")


class SequenceIndexError(IndexError):
    pass


@dataclass(frozen=True)
class EnergySequence:
    """Eigenvalue sequence ``eps_0 <= eps_1 <= ...`` with ``eps_0 = 0``
    for bosonic kinds.

    ``kind`` is one of ``oscillator`` (eps_n = n), ``landau_bosonic`` and
    ``landau_fermionic`` (parameter ``m``), or ``table`` (explicit values).
    """

    kind: str
    m: int | None = None
    values: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.kind.startswith("landau"):
            if not isinstance(self.m, int) or self.m < 1:
                raise ValueError("landau sequences need an integer m >= 1")
        if self.kind == "table":
            vals = tuple(float(v) for v in self.values)
            if not vals:
                raise ValueError("table sequence needs at least one value")
            if any(not math.isfinite(v) or v < 0 for v in vals):
                raise ValueError("table values must be finite and non-negative")
            object.__setattr__(self, "values", vals)

    @classmethod
    def oscillator(cls) -> "EnergySequence":
        return cls("oscillator")

    @classmethod
    def landau_bosonic(cls, m: int) -> "EnergySequence":
        return cls("landau_bosonic", m=m)

    @classmethod
    def landau_fermionic(cls, m: int) -> "EnergySequence":
        return cls("landau_fermionic", m=m)

    @classmethod
    def table(cls, values: Sequence[float]) -> "EnergySequence":
        return cls("table", values=tuple(values))

    @classmethod
    def from_file(cls, path) -> "EnergySequence":
        """Load a table sequence: a JSON list, or whitespace-separated decimals."""
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = [float(tok) for tok in text.split()]
        if isinstance(data, dict):
            data = data.get("values", [])
        return cls.table([float(v) for v in data])

    @property
    def exact(self) -> bool:
        return self.kind != "table"

    @property
    def limit(self) -> float:
        """``L = lim eps_n`` (``inf`` for the oscillator)."""
        if self.kind == "oscillator":
            return math.inf
        if self.kind == "table":
            return max(self.values)
        return self.m**2 / 2

    @property
    def radius(self) -> float:
        """Convergence radius ``sqrt(L)`` of the coherent-state series in |z|."""
        return math.sqrt(self.limit)

    def __len__(self):
        if self.kind == "table":
            return len(self.values)
        raise TypeError("built-in sequences are infinite")

    def label(self) -> str:
        return self.kind if self.m is None else f"{self.kind}(m={self.m})"


def eps(seq: EnergySequence, n: int):
    """``eps_n``; a :class:`Fraction` for built-in kinds, a float for tables."""
    if n < 0:
        raise ValueError("index must be non-negative")
    if seq.kind == "oscillator":
        return Fraction(n)
    if seq.kind == "landau_bosonic":
        return Fraction(seq.m**2, 2) * (1 - Fraction(1, (n + 1) ** 2))
    if seq.kind == "landau_fermionic":
        return Fraction(seq.m**2, 2) * (1 - Fraction(1, (n + 2) ** 2))
    if n >= len(seq.values):
        raise SequenceIndexError(f"table sequence has {len(seq.values)} entries, asked for {n}")
    return seq.values[n]


def eps_float(seq: EnergySequence, n: int) -> float:
    """Float ``eps_n`` without rational intermediates (for long series)."""
    if seq.kind == "oscillator":
        return float(n)
    if seq.kind == "landau_bosonic":
        return 0.5 * seq.m**2 * (1.0 - 1.0 / (n + 1) ** 2)
    if seq.kind == "landau_fermionic":
        return 0.5 * seq.m**2 * (1.0 - 1.0 / (n + 2) ** 2)
    return float(eps(seq, n))


def factorial(seq: EnergySequence, n: int):
    """``eps_n! = eps_1 eps_2 ... eps_n`` with ``eps_0! = 1``."""
    if n < 0:
        raise ValueError("index must be non-negative")
    out = Fraction(1) if seq.exact else 1.0
    for j in range(1, n + 1):
        out *= eps(seq, j)
    return out


def log_factorial(seq: EnergySequence, n: int) -> float:
    """``sum_{k<=n} log eps_k``; overflow-safe companion of :func:`factorial`."""
    if n < 0:
        raise ValueError("index must be non-negative")
    if seq.kind == "oscillator":
        return math.lgamma(n + 1)
    if seq.kind == "landau_bosonic":
        return (2 * n * math.log(seq.m) - (n + 1) * math.log(2.0)
                + math.log((n + 2) / (n + 1)))
    total = 0.0
    for j in range(1, n + 1):
        e = float(eps(seq, j))
        total += math.log(e) if e > 0 else -math.inf
    return total


def landau_factorial_closed_form(m: int, n: int) -> Fraction:
    """``m^(2n) / 2^(n+1) * (1 + 1/(n+1))`` for the bosonic Landau sequence."""
    return Fraction(m ** (2 * n), 2 ** (n + 1)) * (1 + Fraction(1, n + 1))


def landau_inverse_factorial(m: int, n: int) -> Fraction:
    """``2^(n+1) / m^(2n) * (1 - 1/(n+2))``, which equals ``1 / eps_n!``."""
    return Fraction(2 ** (n + 1), m ** (2 * n)) * (1 - Fraction(1, n + 2))


@dataclass
class ConsistencyReport:
    m: int
    n_max: int
    mismatches: list[int]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def partner_consistency(m: int, n_max: int) -> ConsistencyReport:
    """Exact check of ``eps^f_n == eps^b_{n+1}`` for ``n <= n_max``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    b = EnergySequence.landau_bosonic(m)
    f = EnergySequence.landau_fermionic(m)
    bad = [n for n in range(n_max + 1) if eps(f, n) != eps(b, n + 1)]
    return ConsistencyReport(m, n_max, bad)


# ---------------------------------------------------------------------------
# ground-state profiles of a 1D superpotential

@dataclass
class GroundStateProfile:
    grid: np.ndarray
    phi_b: np.ndarray
    chi: np.ndarray
    phi_b_norm2: float
    chi_norm2: float
    phi_b_normalizable: bool
    chi_normalizable: bool
    log_norms_phi: np.ndarray = field(repr=False, default=None)
    log_norms_chi: np.ndarray = field(repr=False, default=None)

    @property
    def partner_exclusive(self) -> bool:
        """False only if both profiles were judged square integrable."""
        return not (self.phi_b_normalizable and self.chi_normalizable)


def _eval(w: Callable, t: np.ndarray) -> np.ndarray:
    out = np.broadcast_to(np.asarray(w(t), dtype=float), t.shape)
    if not np.all(np.isfinite(out)):
        raise ValueError("superpotential produced non-finite samples")
    return out


def _integral_from_zero(w: Callable, x: np.ndarray, tol: float = 1e-10,
                        chunk: int = 256) -> np.ndarray:
    """``int_0^x w`` at every sample by composite Simpson, refined until the
    change on halving the step is below ``tol`` (relative, floored at 1)."""
    out = np.empty(x.shape)
    for start in range(0, x.size, chunk):
        xs = x[start:start + chunk]
        s = np.linspace(0.0, 1.0, 9)
        prev = None
        for _ in range(14):
            npan = s.size - 1
            weights = np.ones(s.size)
            weights[1:-1:2] = 4.0
            weights[2:-1:2] = 2.0
            weights /= 3.0 * npan
            cur = xs * (_eval(w, np.outer(xs, s)) @ weights)
            if prev is not None:
                delta = np.max(np.abs(cur - prev) / np.maximum(1.0, np.abs(cur)))
                if delta < tol:
                    break
            prev = cur
            s = np.linspace(0.0, 1.0, 2 * npan + 1)
        out[start:start + chunk] = cur
    return out


def _log_trapezoid(logf: np.ndarray, x: np.ndarray) -> float:
    """log of the trapezoid integral of ``exp(logf)`` over ``x``."""
    dx = np.diff(x)
    pair = np.logaddexp(logf[:-1], logf[1:]) + np.log(dx / 2)
    return float(np.logaddexp.reduce(pair))


def ground_state_profiles(w: Callable, x_range=(-4.0, 4.0), samples: int = 801,
                          *, doublings: int = 4, growth: float = 10.0
                          ) -> GroundStateProfile:
    """Zero modes ``phi_b = exp(-sqrt2 int_0^x W)`` of ``A`` and
    ``chi = exp(+sqrt2 int_0^x W)`` of ``A^dagger`` (hbar = mass = 1).

    Square integrability is judged by growing the symmetric window
    ``[-R, R]`` (``R = max |x_range|``) by ``doublings`` doublings: a
    profile is *divergent* when its norm grows by more than ``growth``
    between the last two windows.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    lo, hi = map(float, x_range)
    if not lo < hi:
        raise ValueError("x_range must be increasing")
    grid = np.linspace(lo, hi, samples)
    integral = _integral_from_zero(w, grid)
    s2 = math.sqrt(2.0)
    phi = np.exp(-s2 * integral)
    chi = np.exp(s2 * integral)

    R0 = max(abs(lo), abs(hi))
    n_norm = 4001
    log_phi, log_chi = [], []
    for d in range(doublings + 1):
        R = R0 * 2**d
        xs = np.linspace(-R, R, n_norm)
        I_ = _integral_from_zero(w, xs)
        log_phi.append(_log_trapezoid(-2 * s2 * I_, xs))
        log_chi.append(_log_trapezoid(2 * s2 * I_, xs))
    log_phi = np.array(log_phi)
    log_chi = np.array(log_chi)
    thresh = math.log(growth)
    phi_ok = bool(log_phi[-1] - log_phi[-2] <= thresh)
    chi_ok = bool(log_chi[-1] - log_chi[-2] <= thresh)
    with np.errstate(over="ignore"):
        phi_n2 = float(np.exp(log_phi[0]))
        chi_n2 = float(np.exp(log_chi[0]))
    return GroundStateProfile(
        grid=grid, phi_b=phi, chi=chi,
        phi_b_norm2=phi_n2, chi_norm2=chi_n2,
        phi_b_normalizable=phi_ok, chi_normalizable=chi_ok,
        log_norms_phi=log_phi, log_norms_chi=log_chi,
    )
