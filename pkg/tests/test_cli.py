import json
import subprocess
import sys

import pytest

from susyvcs.cli import ConfigError, RunConfig, build_parser, config_from_args, main, run
from susyvcs.superpotentials import BUILTIN_SPECS


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_spectrum_json(capsys):
    code, out = _run(["spectrum", "--m", "1", "--ell", "1", "--k", "2"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["schema_version"] == 1 and doc["command"] == "spectrum"
    assert doc["summary"]["fail"] == 0
    assert set(doc["environment"]) >= {"python", "numpy", "scipy"}
    assert "out_dir" not in doc["config"]


def test_spectrum_csv(capsys):
    code, out = _run(["spectrum", "--m", "1", "--ell", "1", "--csv"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 4
    eps0 = float(lines[1].split(",")[-1])
    assert eps0 == pytest.approx(0.375, abs=2e-3)


def test_vcs_command(capsys):
    code, out = _run(["vcs", "--model", "oscillator", "--z", "1,0"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["data"]["normalization"] == pytest.approx(4.436563656918091)


def test_vcs_outside_domain_is_usage_error(capsys):
    code, _ = _run(["vcs", "--model", "landau", "--m", "1", "--z", "1,0"], capsys)
    assert code == 2


def test_algebra_command(tmp_path, capsys):
    path = tmp_path / "w.json"
    path.write_text(json.dumps(BUILTIN_SPECS["standard"].to_dict()))
    code, out = _run(["algebra", "--superpotential", str(path)], capsys)
    doc = json.loads(out)
    assert doc["summary"]["pass"] > 0
    # literal reference statements are flagged, never failed
    assert code == 0 and doc["summary"]["fail"] == 0


def test_algebra_missing_file(tmp_path, capsys):
    code, _ = _run(["algebra", "--superpotential", str(tmp_path / "nope.json")], capsys)
    assert code == 2


def test_moments_verify_and_fit(tmp_path, capsys):
    code, out = _run(["moments", "--model", "landau", "--m", "2", "--n-max", "10"], capsys)
    assert code == 0 and json.loads(out)["summary"]["fail"] == 0
    targets = tmp_path / "t.json"
    targets.write_text(json.dumps([1, 1, 2, 6, 24, 120]))
    code, out = _run(["moments", "--fit", "--targets", str(targets), "--grid", "6,32"], capsys)
    assert code == 0


def test_residuals_command(capsys):
    code, out = _run(["residuals", "--example", "quartic", "--param", "-3", "--csv"], capsys)
    assert code == 0 and out.startswith("example,k_or_m,window,residual")


def test_out_dir_and_env(tmp_path, capsys, monkeypatch):
    code, _ = _run(["spectrum", "--m", "2", "--ell", "0", "--out-dir", str(tmp_path / "a")], capsys)
    assert (tmp_path / "a" / "report-spectrum.json").exists()
    assert (tmp_path / "a" / "spectrum.csv").exists()
    monkeypatch.setenv("SUSYVCS_OUTPUT_DIR", str(tmp_path / "b"))
    _run(["residuals", "--example", "landau-ground", "--param", "1"], capsys)
    assert (tmp_path / "b" / "report-residuals.json").exists()


def test_config_file_overrides_flags(tmp_path):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps({"m": 2, "k": 1}))
    args = build_parser().parse_args(["spectrum", "--m", "1", "--ell", "0", "--config",
                                      str(cfg_path)])
    cfg = config_from_args(args, environ={})
    assert cfg.m == 2 and cfg.k == 1


def test_unknown_config_key(tmp_path, capsys):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps({"bogus": 1}))
    code, _ = _run(["spectrum", "--m", "1", "--ell", "0", "--config", str(cfg_path)], capsys)
    assert code == 2


@pytest.mark.parametrize("bad", [dict(frame_tol=0), dict(N=1), dict(m=0), dict(ell=3),
                                 dict(command="nope")])
def test_run_config_validation(bad):
    kw = {"command": "spectrum", **bad}
    with pytest.raises(ConfigError):
        RunConfig(**kw)


def test_report_body_deterministic():
    cfg = RunConfig("vcs", model="landau", m=1, N=10, z=(0.3, 0.1))
    a, _ = run(cfg)
    b, _ = run(cfg)
    assert a.body() == b.body()
    assert json.loads(a.to_json(timestamp="T"))["generated_at"] == "T"


def test_verify_all_exit_zero(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "susyvcs", "verify-all", "--out-dir",
                           str(tmp_path)], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["summary"]["fail"] == 0 and doc["summary"]["flagged"] > 0
    assert all(e["paper_anchor"] for e in doc["entries"])
    assert (tmp_path / "entries.csv").exists()
    flagged = [e for e in doc["entries"] if e["status"] == "flagged"]
    assert all(e["note"] or e.get("residual") for e in flagged)
