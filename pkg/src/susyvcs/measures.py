"""Radial measures for the moment problem ``2 pi int r^(2n) dlambda = eps_n!``."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import gammainc, gammaln

from .spectra import EnergySequence, factorial, log_factorial

__all__ = [
    "Density",
    "RadialMeasure",
    "MomentReport",
    "DivergenceError",
    "moment",
    "log_moment",
    "verify_moments",
    "adaptive_integral",
    "oscillator_measure",
    "landau_measure",
]

TWO_PI = 2.0 * math.pi
DENSITY_KINDS = ("gaussian_radial", "linear_radial", "table")


class DivergenceError(ArithmeticError):
    """A moment integral does not converge."""


@dataclass(frozen=True)
class Density:
    """Radial density on ``(0, R)``.

    ``gaussian_radial``: ``c exp(-r^2) r``; ``linear_radial``: ``c r``;
    ``table``: piecewise-linear interpolation of ``values`` on ``grid``.
    """

    kind: str
    c: float = 1.0
    grid: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in DENSITY_KINDS:
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "table":
            g = tuple(float(v) for v in self.grid)
            v = tuple(float(v) for v in self.values)
            if len(g) < 2 or len(g) != len(v):
                raise ValueError("table density needs matching grid and values (>= 2)")
            if any(b <= a for a, b in zip(g, g[1:])) or g[0] < 0:
                raise ValueError("table grid must be increasing and non-negative")
            if any(x < 0 or not math.isfinite(x) for x in v):
                raise ValueError("density values must be finite and non-negative")
            object.__setattr__(self, "grid", g)
            object.__setattr__(self, "values", v)
        elif not (math.isfinite(self.c) and self.c >= 0):
            raise ValueError("density constant must be finite and non-negative")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "gaussian_radial":
            return self.c * np.exp(-r * r) * r
        if self.kind == "linear_radial":
            return self.c * r
        return np.interp(r, self.grid, self.values, left=0.0, right=0.0)

    def to_dict(self) -> dict:
        if self.kind == "table":
            return {"kind": self.kind, "params": {"grid": list(self.grid),
                                                  "values": list(self.values)}}
        return {"kind": self.kind, "params": {"c": self.c}}

    @classmethod
    def from_dict(cls, data: dict) -> "Density":
        unknown = set(data) - {"kind", "params"}
        if unknown:
            raise ValueError(f"unknown density keys: {sorted(unknown)}")
        params = dict(data.get("params", {}))
        allowed = {"grid", "values"} if data["kind"] == "table" else {"c"}
        if set(params) - allowed:
            raise ValueError(f"unknown density params: {sorted(set(params) - allowed)}")
        if data["kind"] == "table":
            return cls("table", grid=tuple(params["grid"]), values=tuple(params["values"]))
        return cls(data["kind"], c=float(params.get("c", 1.0)))


@dataclass(frozen=True)
class RadialMeasure:
    """``sum_i w_i delta(r - r_i) + density(r) dr`` on ``(0, R]``."""

    atoms: tuple[tuple[float, float], ...] = ()
    density: Density | None = None
    R: float = math.inf

    def __post_init__(self):
        R = float(self.R)
        if not R > 0:
            raise ValueError("support radius must be positive")
        atoms = tuple((float(r), float(w)) for r, w in self.atoms)
        for r, w in atoms:
            if not (0 < r <= R) or not math.isfinite(r):
                raise ValueError(f"atom location {r} outside (0, R]")
            if not (w >= 0 and math.isfinite(w)):
                raise ValueError("atom weights must be finite and non-negative")
        if self.density is not None and self.density.kind == "table":
            if self.density.grid[-1] > R:
                raise ValueError("table density extends beyond R")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "atoms", atoms)

    def to_dict(self) -> dict:
        return {
            "atoms": [[r, w] for r, w in self.atoms],
            "density": None if self.density is None else self.density.to_dict(),
            "R": None if math.isinf(self.R) else self.R,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RadialMeasure":
        unknown = set(data) - {"atoms", "density", "R"}
        if unknown:
            raise ValueError(f"unknown measure keys: {sorted(unknown)}")
        dens = data.get("density")
        R = data.get("R")
        return cls(
            atoms=tuple(tuple(a) for a in data.get("atoms", [])),
            density=None if dens is None else Density.from_dict(dens),
            R=math.inf if R is None else float(R),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RadialMeasure":
        return cls.from_dict(json.loads(text))

    def radial_quadrature(self, npts: int = 64) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights with ``int f dlambda ~ sum w_i f(r_i)``.

        Independent of the closed-form moment routes: Gauss-Laguerre in
        ``t = r^2`` for a Gaussian density on the half line, Gauss-Legendre
        otherwise. Atoms are appended exactly.
        """
        nodes, weights = [], []
        d = self.density
        if d is not None:
            if d.kind == "gaussian_radial" and math.isinf(self.R):
                t, w = np.polynomial.laguerre.laggauss(npts)
                nodes.append(np.sqrt(t))
                weights.append(0.5 * d.c * w)
            elif math.isinf(self.R):
                raise DivergenceError(f"{d.kind} density has infinite mass on (0, inf)")
            else:
                x, w = np.polynomial.legendre.leggauss(npts)
                if d.kind == "table":
                    edges = np.asarray(d.grid)
                else:
                    edges = np.array([0.0, self.R])
                for a, b in zip(edges[:-1], edges[1:]):
                    r = 0.5 * (b - a) * x + 0.5 * (a + b)
                    nodes.append(r)
                    weights.append(0.5 * (b - a) * w * d(r))
        if self.atoms:
            nodes.append(np.array([r for r, _ in self.atoms]))
            weights.append(np.array([w for _, w in self.atoms]))
        if not nodes:
            return np.zeros(0), np.zeros(0)
        return np.concatenate(nodes), np.concatenate(weights)


def oscillator_measure(R: float = math.inf) -> RadialMeasure:
    """``(1/pi) exp(-r^2) r dr``, optionally cut at ``R``."""
    return RadialMeasure(density=Density("gaussian_radial", c=1.0 / math.pi), R=R)


def landau_measure(m: int) -> RadialMeasure:
    """Atom ``1/(4 pi)`` at ``m/sqrt 2`` plus density ``r / (pi m^2)`` below it."""
    R = m / math.sqrt(2.0)
    return RadialMeasure(atoms=((R, 1.0 / (4.0 * math.pi)),),
                         density=Density("linear_radial", c=1.0 / (math.pi * m * m)), R=R)


def adaptive_integral(f, a: float, b: float, *, rtol: float = 1e-12,
                      max_panels: int = 2**20) -> float:
    """Composite Simpson on ``[a, b]`` with panel doubling.

    Stops once successive estimates differ by less than ``rtol`` (relative)
    or ``max_panels`` is reached.
    """
    npan = 2
    x = np.linspace(a, b, npan + 1)
    fx = np.asarray(f(x), dtype=float)
    prev = None
    while True:
        h = (b - a) / npan
        est = h / 3.0 * (fx[0] + fx[-1] + 4.0 * fx[1:-1:2].sum() + 2.0 * fx[2:-1:2].sum())
        if prev is not None and abs(est - prev) <= rtol * abs(est):
            return float(est)
        if 2 * npan > max_panels:
            return float(est)
        prev = est
        mid = a + h * (np.arange(npan) + 0.5)
        new = np.empty(2 * npan + 1)
        new[0::2] = fx
        new[1::2] = np.asarray(f(mid), dtype=float)
        fx = new
        npan *= 2


def _density_integral(measure: RadialMeasure, n: int) -> float:
    """``int_0^R r^(2n) density(r) dr``."""
    d, R = measure.density, measure.R
    if d is None:
        return 0.0
    if d.kind == "gaussian_radial":
        # int r^(2n+1) e^(-r^2) = Gamma(n+1)/2 * P(n+1, R^2)
        full = 0.5 * math.exp(gammaln(n + 1))
        return d.c * (full if math.isinf(R) else full * gammainc(n + 1, R * R))
    if d.kind == "linear_radial":
        if math.isinf(R):
            raise DivergenceError("linear density has divergent moments on (0, inf)")
        return d.c * R ** (2 * n + 2) / (2 * n + 2)
    total = 0.0
    for a, b in zip(d.grid[:-1], d.grid[1:]):
        total += adaptive_integral(lambda r: r ** (2 * n) * d(r), a, b)
    return total


def moment(measure: RadialMeasure, n: int) -> float:
    """``2 pi [sum_i w_i r_i^(2n) + int_0^R r^(2n) density(r) dr]``."""
    if n < 0:
        raise ValueError("moment order must be non-negative")
    atoms = sum(w * r ** (2 * n) for r, w in measure.atoms)
    return TWO_PI * (atoms + _density_integral(measure, n))


def log_moment(measure: RadialMeasure, n: int) -> float:
    """log of :func:`moment`, safe for large ``n``."""
    if n < 0:
        raise ValueError("moment order must be non-negative")
    terms = [math.log(w) + 2 * n * math.log(r) for r, w in measure.atoms if w > 0]
    d, R = measure.density, measure.R
    if d is not None and d.c > 0:
        if d.kind == "gaussian_radial":
            lg = math.log(0.5 * d.c) + gammaln(n + 1)
            if not math.isinf(R):
                lg += math.log(gammainc(n + 1, R * R))
            terms.append(lg)
        elif d.kind == "linear_radial":
            if math.isinf(R):
                raise DivergenceError("linear density has divergent moments on (0, inf)")
            terms.append(math.log(d.c) + (2 * n + 2) * math.log(R) - math.log(2 * n + 2))
        else:
            val = _density_integral(measure, n)
            if val > 0:
                terms.append(math.log(val))
    if not terms:
        return -math.inf
    return math.log(TWO_PI) + float(np.logaddexp.reduce(terms))


@dataclass
class MomentReport:
    n: list[int]
    computed: list[float]
    target: list[float]
    rel_err: list[float]
    tol: float
    max_n: int = field(init=False)

    def __post_init__(self):
        self.max_n = self.n[-1] if self.n else -1

    @property
    def passed(self) -> bool:
        return all(e < self.tol for e in self.rel_err)

    @property
    def max_rel_err(self) -> float:
        return max(self.rel_err) if self.rel_err else 0.0

    def first_failure(self) -> int | None:
        for n, e in zip(self.n, self.rel_err):
            if not e < self.tol:
                return n
        return None

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "computed", "target", "rel_err"])
        for row in zip(self.n, self.computed, self.target, self.rel_err):
            w.writerow([row[0], repr(row[1]), repr(row[2]), repr(row[3])])
        if path is not None:
            Path(path).write_text(buf.getvalue())
        return buf.getvalue()


_DIRECT_LIMIT = 1e300


def verify_moments(measure: RadialMeasure, seq: EnergySequence, n_max: int,
                   tol: float = 1e-10) -> MomentReport:
    """Compare ``moment(n)`` with ``eps_n!`` for ``n <= n_max``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    ns, comp, targ, errs = [], [], [], []
    for n in range(n_max + 1):
        lt = log_factorial(seq, n)
        if lt < math.log(_DIRECT_LIMIT) - 5:
            t = float(factorial(seq, n))
            c = moment(measure, n)
            err = abs(c - t) / abs(t) if t else abs(c)
        else:
            lc = log_moment(measure, n)
            t, c = math.exp(min(lt, 709.0)), math.exp(min(lc, 709.0))
            err = abs(math.expm1(lc - lt))
        ns.append(n)
        comp.append(c)
        targ.append(t)
        errs.append(err)
    return MomentReport(ns, comp, targ, errs, tol)
