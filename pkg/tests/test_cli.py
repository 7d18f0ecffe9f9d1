import json
import subprocess
import sys

import pytest

from twocrit.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, run
from twocrit.render import read_ppm


def kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines() if "=" in line)


def test_classify_t_one(capsys):
    assert run(["classify", "--t", "1", "0"]) == EXIT_OK
    out = kv(capsys.readouterr().out)
    assert out["class"] == "BothEscape"
    assert out["m"] == "2" and out["n"] == "1"
    # times count from the critical value; both are resolved at once at t = 1
    assert out["iterations"] == "0"


def test_classify_json(capsys):
    assert run(["classify", "--t", "0.01", "0", "--json"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["class"] == "AlphaResidual"
    assert rec["t_re"] == 0.01 and rec["t_im"] == 0.0
    assert set(rec) >= {"level_or_period", "iterations", "alpha_outcome", "beta_outcome"}


def test_classify_cycle_reports_period(capsys):
    t = (7 - 5 ** 0.5 * 3) / 2
    assert run(["classify", "--t", repr(t), "0", "--json"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["class"] == "BetaCycle" and rec["level_or_period"] == 1


def test_orbit_and_boettcher(capsys):
    assert run(["orbit", "--t", "1", "0", "--z", "0.5", "0", "--show", "3", "--json"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["outcome"] == "BasinZero" or "zero" in rec["outcome"].lower()
    # 0.5 -> 1/12 lands in the trap disc, where iteration stops
    assert rec["stored_points"] == 2 and len(rec["points"]) == 2
    assert run(["boettcher", "--t", "1", "0", "--z", "0.05", "0", "--json"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["green"] < rec["boundary_value"] + 1e-12
    assert run(["boettcher", "--t", "0.3", "0.1", "--e", "E0", "--json"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["kind"] == "E0" and rec["modulus"] < 1


def test_boettcher_domain_error_is_usage(capsys):
    assert run(["boettcher", "--t", "7", "0", "--e", "E0"]) == EXIT_USAGE
    assert "E0" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["classify"],
    ["classify", "--t", "0", "0"],
    ["classify", "--t", "1", "0", "--m", "1"],
    ["classify", "--t", "1", "0", "--n", "0"],
    ["classify", "--t", "nan", "0"],
    ["classify", "--t", "1", "0", "--budget", "0"],
    ["render-param", "--out", "x.ppm", "--px", "0"],
    ["render-param", "--out", "x.ppm", "--view", "0", "0", "-1", "1"],
    ["render-param"],
    ["verify", "nosuch"],
    ["boettcher", "--t", "1", "0"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def test_help_lists_defaults(capsys):
    assert run(["render-param", "--help"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "default: 2000" in out and "--unit-circle" in out


def test_verify_resultants(capsys):
    assert run(["verify", "resultants"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS resultants.R_f" in out
    assert "2*t*lambda^2" in out


def test_render_twice_identical(tmp_path, capsys):
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    for path, workers in ((a, "1"), (b, "2")):
        assert run(["render-param", "--px", "30", "--budget", "300", "--workers", workers,
                    "--out", str(path)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert read_ppm(a).width_px == 30
    assert kv(capsys.readouterr().out)["width_px"] == "30"


def test_render_pc_and_dyn(tmp_path):
    out = tmp_path / "pc.ppm"
    assert run(["render-pc", "--t-plane", "--unit-circle", "--px", "20", "16",
                "--out", str(out)]) == EXIT_OK
    img = read_ppm(out)
    assert (img.width_px, img.height_px) == (20, 16)
    out = tmp_path / "dyn.ppm"
    assert run(["render-dyn", "--t", "1", "0", "--px", "20", "--out", str(out)]) == EXIT_OK
    assert out.read_bytes().startswith(b"P6\n20 20\n255\n")


def test_render_unwritable_path(tmp_path, capsys):
    assert run(["render-param", "--px", "4", "--out", str(tmp_path / "no" / "x.ppm")]) \
        == EXIT_FAILED
    assert "no" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twocrit", "classify", "--t", "1", "0"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "class=BothEscape" in proc.stdout
