"""Command-line front end.

Every subcommand prints a JSON report on stdout (or a CSV table with
``--csv``) and, when an output directory is set via ``--out-dir`` or the
``SUSYVCS_OUTPUT_DIR`` environment variable, writes the report and its CSV
sidecars there. The exit status is 0 iff the report has no ``fail`` entry.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from .checks import Check
from .landau import (LandauSector, ground_state_residual, quartic_ground_residual,
                     residual_csv, spectrum_csv, spectrum_rows)
from .measures import landau_measure, oscillator_measure, verify_moments
from .nnls import fit_measure
from .report import Report, algebra_entries, entries_csv, verify_all
from .spectra import EnergySequence
from .superpotentials import SuperpotentialSpec
from .vcs import VcsFamily, coeffs, frame_operator, normalization, overlap

__all__ = ["RunConfig", "ConfigError", "build_parser", "config_from_args", "run", "main"]

OUTPUT_ENV = "SUSYVCS_OUTPUT_DIR"
COMMANDS = ("verify-all", "algebra", "spectrum", "vcs", "moments", "residuals")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    model: str = "oscillator"
    m: int = 1
    N: int = 40
    ell: int = 1
    h: float | None = None
    xmax: float | None = None
    k: int = 3
    z: tuple[float, float] = (0.0, 0.0)
    superpotential: str | None = None
    fit: bool = False
    targets: str | None = None
    grid: tuple[float, int] = (6.0, 64)
    atom: bool = False
    n_max: int = 20
    example: str = "landau-ground"
    param: int = 1
    frame_tol: float = 1e-8
    moment_tol: float = 1e-10
    residual_tol: float = 1e-6
    fit_tol: float = 1e-6
    out_dir: str | None = None
    seed: int = 0
    csv: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        for name in ("frame_tol", "moment_tol", "residual_tol", "fit_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.N < 2:
            raise ConfigError("N must be at least 2")
        if self.m < 1:
            raise ConfigError("m must be a positive integer")
        if self.model not in ("oscillator", "landau"):
            raise ConfigError("model must be 'oscillator' or 'landau'")
        if self.ell not in (0, 1):
            raise ConfigError("ell must be 0 or 1")
        if self.example not in ("landau-ground", "quartic"):
            raise ConfigError("example must be 'landau-ground' or 'quartic'")
        self.z = tuple(float(v) for v in self.z)
        self.grid = (float(self.grid[0]), int(self.grid[1]))

    def echo(self) -> dict:
        """Config as reported; output location is not part of the result."""
        d = dataclasses.asdict(self)
        d.pop("out_dir")
        d.pop("csv")
        return d


def _pair(kind):
    def parse(text: str):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
        try:
            return kind[0](parts[0]), kind[1](parts[1])
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys override the flags")
    common.add_argument("--out-dir", dest="out_dir",
                        help=f"write report and CSV sidecars here (default: ${OUTPUT_ENV})")
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--csv", action="store_true", help="print the main CSV table instead of JSON")

    p = argparse.ArgumentParser(prog="susyvcs",
                                description="Verification tools for SUSY vector coherent states")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-all", parents=[common], help="run every verification suite")
    v.add_argument("--N", type=int)

    a = sub.add_parser("algebra", parents=[common], help="operator identities for a superpotential")
    a.add_argument("--superpotential", required=True, metavar="FILE")

    s = sub.add_parser("spectrum", parents=[common], help="finite-difference radial spectrum")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--ell", type=int, choices=(0, 1), required=True)
    s.add_argument("--h", type=float)
    s.add_argument("--xmax", type=float)
    s.add_argument("--k", type=int, help="number of levels")

    c = sub.add_parser("vcs", parents=[common], help="coherent state at one point")
    c.add_argument("--model", choices=("oscillator", "landau"), required=True)
    c.add_argument("--m", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--z", type=_pair((float, float)), required=True, metavar="RE,IM")

    mo = sub.add_parser("moments", parents=[common], help="verify or fit radial moments")
    mo.add_argument("--fit", action="store_true")
    mo.add_argument("--targets", metavar="FILE")
    mo.add_argument("--grid", type=_pair((float, int)), metavar="R,K")
    mo.add_argument("--atom", action="store_true")
    mo.add_argument("--model", choices=("oscillator", "landau"))
    mo.add_argument("--m", type=int)
    mo.add_argument("--n-max", dest="n_max", type=int)

    r = sub.add_parser("residuals", parents=[common], help="closed-form ground-state residuals")
    r.add_argument("--example", choices=("landau-ground", "quartic"), required=True)
    r.add_argument("--param", type=int, required=True, help="m (landau-ground) or k (quartic)")
    return p


def config_from_args(args: argparse.Namespace, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    values = {k: v for k, v in vars(args).items()
              if k in fields and v is not None and v is not False}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - (fields - {"command"})
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    values.setdefault("out_dir", environ.get(OUTPUT_ENV) or None)
    values["command"] = args.command
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _read_targets(path: str) -> list[float]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["targets"]
        return [float(t) for t in data]
    except json.JSONDecodeError:
        return [float(t) for t in text.split()]


def _family(cfg: RunConfig) -> VcsFamily:
    if cfg.model == "oscillator":
        return VcsFamily.oscillator(cfg.N)
    return VcsFamily.landau(cfg.m, cfg.N)


def _cmd_algebra(cfg: RunConfig) -> tuple[Report, str]:
    try:
        spec = SuperpotentialSpec.from_file(cfg.superpotential)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read superpotential: {exc}") from None
    rep = Report("algebra", cfg.echo())
    rep.extend("algebra", algebra_entries([spec]))
    table = entries_csv(rep.entries)
    rep.sidecars["algebra.csv"] = table
    return rep, table


def _cmd_spectrum(cfg: RunConfig) -> tuple[Report, str]:
    rows = spectrum_rows(cfg.m, cfg.ell, cfg.k, cfg.h, cfg.xmax)
    rep = Report("spectrum", cfg.echo())
    for r in rows:
        rep.extend("spectrum", [Check(f"radial level n={r['n']} (m={cfg.m}, l={cfg.ell})",
                                      "hydrogen-like radial levels", r["rel_err"], 5e-3)])
    rep.data["rows"] = rows
    table = spectrum_csv(rows)
    rep.sidecars["spectrum.csv"] = table
    return rep, table


def _cmd_vcs(cfg: RunConfig) -> tuple[Report, str]:
    fam = _family(cfg)
    z = complex(*cfg.z)
    cv = coeffs(fam, z)
    norm = normalization(fam, z)
    rep = Report("vcs", cfg.echo())
    rep.data["normalization"] = norm
    rep.data["coefficients"] = cv.as_dict()
    rep.extend("vcs", [
        Check("state has unit norm", "coherent-state overlap", abs(overlap(fam, z, z) - 1.0),
              1e-12),
        Check("frame operator = I on interior levels", "resolution of identity",
              frame_operator(fam).deviation, cfg.frame_tol),
    ])
    lines = ["sector,n,re,im"]
    for sector, vals in (("bosonic", cv.bosonic), ("fermionic", cv.fermionic)):
        lines += [f"{sector},{n},{v.real!r},{v.imag!r}" for n, v in enumerate(vals)]
    table = "\n".join(lines) + "\n"
    rep.sidecars["coefficients.csv"] = table
    return rep, table


def _cmd_moments(cfg: RunConfig) -> tuple[Report, str]:
    rep = Report("moments", cfg.echo())
    if cfg.fit:
        if not cfg.targets:
            raise ConfigError("--fit needs --targets FILE")
        try:
            targets = _read_targets(cfg.targets)
        except (OSError, KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"cannot read targets: {exc}") from None
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            res = fit_measure(targets, cfg.grid, cfg.atom)
        rep.extend("fit", [Check("moment fit residual", "moment fitting", res.residual,
                                 cfg.fit_tol)])
        rep.data["measure"] = res.measure.to_dict()
        rep.data["atom_weight"] = res.atom_weight
        rep.data["condition"] = res.condition
        rep.data["warnings"] = [str(w.message) for w in caught]
        lines = ["r,weight"] + [f"{r!r},{w!r}" for r, w in res.measure.atoms]
        table = "\n".join(lines) + "\n"
        rep.sidecars["fitted_measure.csv"] = table
        return rep, table
    if cfg.model == "oscillator":
        meas, seq = oscillator_measure(), EnergySequence.oscillator()
    else:
        meas, seq = landau_measure(cfg.m), EnergySequence.landau_bosonic(cfg.m)
    mr = verify_moments(meas, seq, cfg.n_max, cfg.moment_tol)
    rep.extend("moments", [Check(f"moments reproduce eps_n!, n<={cfg.n_max}", "moment problem",
                                 mr.max_rel_err, cfg.moment_tol)])
    table = mr.to_csv()
    rep.sidecars["moments.csv"] = table
    return rep, table


def _cmd_residuals(cfg: RunConfig) -> tuple[Report, str]:
    rep = Report("residuals", cfg.echo())
    rows = []
    if cfg.example == "landau-ground":
        for j in (0, -2):
            r = ground_state_residual(LandauSector(cfg.param, j))
            win = f"x[{r.window[0][0]:g},{r.window[0][1]:g}] y[{r.window[1][0]:.6g},{r.window[1][1]:.6g}]"
            rows.append({"example": f"landau-ground j={j}", "k_or_m": cfg.param, "window": win,
                         "residual": r.annihilator})
            rep.extend("residuals", [
                Check(f"A Psi_0 = 0 (m={cfg.param}, j={j})", "Landau ground state",
                      r.annihilator, cfg.residual_tol),
                Check(f"H^b Psi_0 = 0 (m={cfg.param}, j={j})", "Landau ground state",
                      r.hamiltonian, cfg.residual_tol),
            ])
    else:
        res = quartic_ground_residual(cfg.param)
        rows.append({"example": "quartic", "k_or_m": cfg.param, "window": "x[-2,2] y[0,2pi]",
                     "residual": res})
        rep.extend("residuals", [Check(f"quartic h^b psi_0 = 0 (k={cfg.param})",
                                       "quartic ground state", res, 1e-8)])
    table = residual_csv(rows)
    rep.sidecars["residuals.csv"] = table
    return rep, table


def run(cfg: RunConfig) -> tuple[Report, str]:
    """Execute one command; returns the report and its main CSV table."""
    if cfg.command == "verify-all":
        rep = verify_all(cfg.echo(), seed=cfg.seed)
        return rep, rep.sidecars["entries.csv"]
    handler = {"algebra": _cmd_algebra, "spectrum": _cmd_spectrum, "vcs": _cmd_vcs,
               "moments": _cmd_moments, "residuals": _cmd_residuals}[cfg.command]
    return handler(cfg)


def _write_outputs(cfg: RunConfig, rep: Report, text: str) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"report-{cfg.command}.json").write_text(text)
    for name, body in rep.sidecars.items():
        (out / name).write_text(body)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        rep, table = run(cfg)
    except (ConfigError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"susyvcs: error: {exc}", file=sys.stderr)
        return 2
    text = rep.to_json()
    if cfg.out_dir:
        _write_outputs(cfg, rep, text)
    sys.stdout.write(table if cfg.csv else text + "\n")
    return rep.exit_status


if __name__ == "__main__":
    raise SystemExit(main())
