import json
import math
import subprocess
import sys

import numpy as np
import pytest

from dit.cli import main, parse_drive, parse_grid, ConfigError
from dit.io import CSV_HEADER, read_spectrum_csv


def run(*argv):
    return main([str(a) for a in argv])


def test_spectrum_minimal(tmp_path):
    assert run("spectrum", "--g1", "0", "--grid", "-0.001:0.001:2", "--out", tmp_path) == 0
    data = read_spectrum_csv(tmp_path / "spectrum.csv")
    assert len(data["detuning_thz"]) == 2
    np.testing.assert_allclose(np.abs(data["phase_rad"]), math.pi, atol=1e-3)
    assert (tmp_path / "spectrum.svg").exists()
    assert (tmp_path / "manifest.json").exists()


def test_points_flag(tmp_path):
    assert run("spectrum", "--g1", "0", "--points", "2", "--out", tmp_path) == 0
    assert len(read_spectrum_csv(tmp_path / "spectrum.csv")["detuning_thz"]) == 2


def test_csv_header_and_precision(tmp_path):
    run("phase", "--grid", "-1:1:5", "--out", tmp_path)
    lines = (tmp_path / "phase.csv").read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 6
    # 17 significant digits round-trip exactly
    re_r = float(lines[2].split(",")[1])
    from dit import reflection, paper_defaults

    assert re_r == reflection(paper_defaults(), -0.5).r.real


def test_figures_outputs(tmp_path):
    assert run("figures", "--out", tmp_path) == 0
    csvs = sorted(p.name for p in tmp_path.glob("*.csv"))
    svgs = sorted(p.name for p in tmp_path.glob("*.svg"))
    assert len(csvs) == 8
    assert svgs == ["fig2_reflectivity.svg", "fig3_phase.svg", "fig4_kerr_phase.svg"]
    side = json.loads((tmp_path / "fig4_Delta_g_m6.json").read_text())
    assert side["drive"]["Delta"] == pytest.approx(-1.8)
    assert side["stark"]["re_S"] == pytest.approx(-0.1, rel=1e-6)
    assert json.loads((tmp_path / "fig4_Delta_g_inf.json").read_text())["drive"]["Delta"] == "inf"


def test_figures_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run("figures", "--out", a)
    run("figures", "--out", b)
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes(), f.name


def test_oracle_check_exit_codes(tmp_path):
    assert run("oracle-check", "--tol", "1e-6", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "oracle_report.json").read_text())
    assert report["summary"]["pass"] is True
    assert len(report["points"]) == 41
    assert run("oracle-check", "--tol", "1e-30", "--grid", "-0.1:0.1:3", "--out", tmp_path / "x") == 2


def test_oracle_check_with_drive(tmp_path):
    assert run("oracle-check", "--drive", "-6g:1", "--grid", "-0.3:0.3:5", "--out", tmp_path) == 0
    rep = json.loads((tmp_path / "oracle_report.json").read_text())
    assert rep["effective_dipole_shift"][0] == pytest.approx(-0.1, rel=1e-6)


def test_kerr_custom_drives(tmp_path):
    assert run("kerr", "--drive", "inf:1", "--drive", "-1.8:flux=12", "--grid", "-1:1:101", "--out", tmp_path) == 0
    side = json.loads((tmp_path / "kerr_1.json").read_text())
    assert side["drive"]["mode"] == "flux"
    # 12 photons/ps into gamma = 6 is two intracavity photons
    assert side["stark"]["re_S"] == pytest.approx(-0.2, rel=1e-6)
    assert sorted(p.name for p in tmp_path.glob("kerr_*.csv")) == ["kerr_0.csv", "kerr_1.csv"]


def test_config_file_with_units(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# paper set\ngamma = 6 THz\ntau2 = 1 GHz\ng1 = 300 GHz\ngrid = -1:1:11\nformats = csv,json\n")
    assert run("spectrum", "--config", cfg, "--out", tmp_path / "o") == 0
    man = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert man["params"]["tau2"] == pytest.approx(1e-3)
    assert man["params"]["g1"] == pytest.approx(0.3)
    assert man["grid"] == {"min": -1.0, "max": 1.0, "points": 11}
    assert not (tmp_path / "o" / "spectrum.svg").exists()


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("g1 = 0.1\n")
    run("spectrum", "--config", cfg, "--g1", "0.2", "--points", "3", "--out", tmp_path / "o")
    man = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert man["params"]["g1"] == 0.2


def test_bad_config_line_number(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("gamma = 6\n\nkappa = lots\n")
    assert run("spectrum", "--config", cfg, "--out", tmp_path) == 1
    assert f"{cfg}:3:" in capsys.readouterr().err


def test_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run("spectrum", "--config", cfg) == 1
    assert ":1:" in capsys.readouterr().err


def test_validation_failure_exit(tmp_path, capsys):
    assert run("spectrum", "--gamma", "0", "--out", tmp_path) == 1
    assert "gamma must be positive" in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run("spectrum", "--points", "3", "--out", blocker) == 1


def test_manifest_round_trip(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert run("kerr", "--g1", "0.2", "--tau3", "2 GHz", "--drive", "-4g:2", "--grid", "-0.5:0.5:51", "--out", first) == 0
    assert run("kerr", "--config", first / "manifest.json", "--out", second) == 0
    for name in ("kerr_0.csv", "kerr_0.json", "manifest.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_parse_helpers():
    assert parse_grid("-3:3:2001") == (-3.0, 3.0, 2001)
    assert parse_grid("-100 GHz:0.1:3") == (-0.1, 0.1, 3)
    for bad in ("1:2", "2:1:5", "0:1:1"):
        with pytest.raises(ConfigError):
            parse_grid(bad)
    assert parse_drive("-6g:1", 0.3).Delta == pytest.approx(-1.8)
    assert parse_drive("inf:1", 0.3).active is False
    assert parse_drive("-500 GHz:2", 0.3).Delta == pytest.approx(-0.5)
    with pytest.raises(ConfigError):
        parse_drive("nonsense", 0.3)


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "dit", "spectrum", "--points", "3", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert out.returncode == 0, out.stderr
    assert "purcell_factor" in out.stdout
