"""Verification suites and the structured report they feed."""

from __future__ import annotations

import csv
import io
import json
import math
import platform
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .checks import Check
from .fock import build_layout, formal_annihilator_check, shift_relations
from .grassmann import convention_table, hol_checks
from .landau import landau_checks
from .measures import landau_measure, oscillator_measure, verify_moments
from .nnls import fit_measure
from .spectra import (EnergySequence, factorial, landau_factorial_closed_form,
                      partner_consistency)
from .superpotentials import (BUILTIN_SPECS, canonical_relations, case1_identities,
                              case2_commutation, symplectic_check, verify_relations)
from .vcs import (VcsFamily, extended_frame, fqhe_frame, frame_operator, overlap)

__all__ = ["SCHEMA_VERSION", "Report", "environment_stamp", "algebra_entries",
           "spectra_entries", "moment_entries", "fock_entries", "vcs_entries",
           "grassmann_entries", "landau_entries", "fit_entries", "verify_all"]

SCHEMA_VERSION = 1


def environment_stamp() -> dict:
    import scipy
    import sklearn
    import sympy

    return {
        "python": platform.python_version(),
        "platform": platform.platform(terse=True),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "sympy": sympy.__version__,
        "scikit-learn": sklearn.__version__,
    }


def _clean(obj):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


@dataclass
class Report:
    command: str
    config: dict
    entries: list[dict] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    sidecars: dict[str, str] = field(default_factory=dict)

    def extend(self, suite: str, items) -> None:
        for it in items:
            entry = it.as_entry() if hasattr(it, "as_entry") else dict(it)
            self.entries.append({"suite": suite, **entry})

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "flagged": 0}
        for e in self.entries:
            out[e["status"]] += 1
        return out

    @property
    def exit_status(self) -> int:
        return 1 if self.counts["fail"] else 0

    def body(self) -> dict:
        """Everything except the timestamp; deterministic for a fixed config."""
        return _clean({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "environment": environment_stamp(),
            "config": self.config,
            "summary": self.counts,
            "entries": self.entries,
            "data": self.data,
        })

    def to_json(self, timestamp: str | None = None) -> str:
        doc = self.body()
        doc["generated_at"] = timestamp or time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return json.dumps(doc, indent=2, sort_keys=False)


def entries_csv(entries) -> str:
    buf = io.StringIO()
    cols = ["suite", "name", "paper_anchor", "status", "metric", "tolerance", "note"]
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for e in entries:
        w.writerow(e)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# suites


def algebra_entries(specs=None) -> list:
    specs = specs or list(BUILTIN_SPECS.values())
    out: list = list(canonical_relations())
    ok, _ = symplectic_check()
    out.append(Check("Landau variable change is symplectic", "canonical commutators",
                     0.0 if ok else 1.0, 0.0))
    out.extend(case1_identities())
    for spec in specs:
        out.extend(verify_relations(spec))
        if spec.is_case2:
            out.extend(case2_commutation(spec))
    return out


def spectra_entries(m_values=range(1, 6), n_max: int = 50, fact_n: int = 30) -> list[Check]:
    out = []
    for m in m_values:
        rep = partner_consistency(m, n_max)
        out.append(Check(f"eps^f_n = eps^b_(n+1), m={m}, n<={n_max}", "partner spectra",
                         float(len(rep.mismatches)), 0.0))
        seq = EnergySequence.landau_bosonic(m)
        worst = max(abs(float(factorial(seq, n) / landau_factorial_closed_form(m, n)) - 1.0)
                    for n in range(fact_n + 1))
        out.append(Check(f"factorial product = closed form, m={m}, n<={fact_n}",
                         "Landau factorials", worst, 1e-12))
    return out


def moment_entries(n_max: int = 20, tol: float = 1e-10) -> list[Check]:
    out = []
    cases = [("oscillator", oscillator_measure(), EnergySequence.oscillator())]
    cases += [(f"landau m={m}", landau_measure(m), EnergySequence.landau_bosonic(m))
              for m in (1, 2, 3)]
    for label, meas, seq in cases:
        rep = verify_moments(meas, seq, n_max, tol)
        out.append(Check(f"moments reproduce eps_n!, {label}, n<={n_max}", "moment problem",
                         rep.max_rel_err, tol))
    return out


def fock_entries(N: int = 8) -> list[Check]:
    out = []
    for seq in (EnergySequence.oscillator(), EnergySequence.landau_bosonic(1)):
        tag = seq.label()
        for c in shift_relations(build_layout(seq, N, extended=True)):
            c.name = f"{tag}: {c.name}"
            out.append(c)
        for c in formal_annihilator_check(build_layout(seq, N)):
            c.name = f"{tag}: {c.name}"
            out.append(c)
    return out


def vcs_entries(N: int = 40, interior: int = 30, tol: float = 1e-8, fqhe=(3, 20),
                seed: int = 0) -> list[Check]:
    out = []
    rng = np.random.default_rng(seed)
    fams = [("oscillator", VcsFamily.oscillator(N)), ("landau m=1", VcsFamily.landau(1, N))]
    for label, fam in fams:
        rep = frame_operator(fam)
        L = fam.layout
        idx = [L.b(n) for n in range(interior + 1)] + [L.f(n) for n in range(interior + 1)]
        dev = float(np.max(np.abs(rep.matrix[np.ix_(idx, idx)] - np.eye(len(idx)))))
        out.append(Check(f"frame operator = I, {label}, N={N}, indices<={interior}",
                         "resolution of identity", dev, tol))
        rad = fam.domain_radius
        rmax = 1.5 if math.isinf(rad) else 0.8 * rad
        zs = rmax * np.sqrt(rng.random(4)) * np.exp(2j * np.pi * rng.random(4))
        herm = max(abs(overlap(fam, a, b) - np.conj(overlap(fam, b, a))) for a in zs for b in zs)
        bound = max(abs(overlap(fam, a, b)) for a in zs for b in zs)
        out.append(Check(f"overlap Hermitian, {label}", "coherent-state overlap", herm, 1e-12))
        out.append(Check(f"|overlap| <= 1, {label}", "coherent-state overlap",
                         max(0.0, bound - 1.0), 1e-12))
    for n_small in (3, 10):
        for label, fam in (("oscillator", VcsFamily.oscillator(n_small)),
                           ("landau m=1", VcsFamily.landau(1, n_small))):
            a = frame_operator(fam, "angular").matrix
            q = frame_operator(fam, "quadrature").matrix
            out.append(Check(f"angular = quadrature frame, {label}, N={n_small}",
                             "resolution of identity", float(np.max(np.abs(a - q))), 1e-6))
    K, Nf = fqhe
    fr = fqhe_frame(Nf, K)
    out.append(Check(f"degenerate-label frame = I, K={K}, N={Nf}", "degenerate oscillator frame",
                     fr.deviation, tol))
    out.append(Check("no coupling between degeneracy labels", "degenerate oscillator frame",
                     fr.cross_k, 0.0))
    for label, fam in (("oscillator", VcsFamily.oscillator(12)),
                       ("landau m=1", VcsFamily.landau(1, 12))):
        for conv in ("normalized", "literal"):
            for c in extended_frame(fam, conv, tol=tol).checks:
                c.name = f"{label}, {conv} weights: {c.name}"
                out.append(c)
    return out


def grassmann_entries(N: int = 20) -> tuple[list[Check], list[dict]]:
    out = []
    tables = []
    for label, fam in (("oscillator", VcsFamily.oscillator(N)),
                       ("landau m=1", VcsFamily.landau(1, N))):
        for c in hol_checks(fam):
            c.name = f"{label}: {c.name}"
            out.append(c)
        tables.append({"family": label, "conventions": convention_table(fam)})
    return out, tables


def landau_entries(residual_tol: float = 1e-6) -> list[Check]:
    return landau_checks(residual_tol=residual_tol)


def fit_entries() -> list[Check]:
    seq = EnergySequence.oscillator()
    osc = fit_measure([float(factorial(seq, n)) for n in range(11)], (6.0, 64))
    m = 1
    lseq = EnergySequence.landau_bosonic(m)
    lan = fit_measure([float(factorial(lseq, n)) for n in range(13)], (m / math.sqrt(2), 64),
                      allow_boundary_atom=True)
    target = 1 / (4 * math.pi)
    return [
        Check("oscillator moment fit n<=10", "moment fitting", osc.residual, 1e-6),
        Check("Landau fit (n<=12) recovers boundary atom 1/(4 pi)", "moment fitting",
              abs(lan.atom_weight / target - 1.0), 0.05,
              note=f"atom weight {lan.atom_weight:.6g}"),
    ]


def verify_all(config: dict, seed: int = 0) -> Report:
    rep = Report("verify-all", config)
    rep.extend("algebra", algebra_entries())
    rep.extend("spectra", spectra_entries())
    rep.extend("moments", moment_entries(tol=config.get("moment_tol", 1e-10)))
    rep.extend("fock", fock_entries())
    rep.extend("vcs", vcs_entries(N=config.get("N", 40), tol=config.get("frame_tol", 1e-8),
                                  seed=seed))
    g, tables = grassmann_entries()
    rep.extend("grassmann", g)
    rep.data["berezin_conventions"] = tables
    rep.extend("landau", landau_entries(config.get("residual_tol", 1e-6)))
    rep.extend("fit", fit_entries())
    rep.sidecars["entries.csv"] = entries_csv(rep.entries)
    return rep
