import json
import subprocess
import sys
from pathlib import Path

import pytest

from multlab import cli
from multlab.errors import NegativeChi

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "problems"
CURVE = PROBLEMS / "curve_4_5_11.toml"


def run_json(capsys, *argv):
    code = cli.main([*argv, "--json", "-"])
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out)


def test_chi_on_the_curve(capsys):
    rep = run_json(capsys, "chi", "--problem", str(CURVE))
    r = rep["results"]
    assert (r["e0_a"], r["e0_q"], r["c"], r["chi"]) == (4, 4, [1], 0)
    assert rep["schema"] == 1
    assert rep["command"] == "chi"


def test_bezout_axes(capsys):
    r = run_json(capsys, "bezout", "-f", "x", "-g", "y")["results"]
    assert r["mu"] == 1 and r["transversal"]


def test_hilbert_plane(capsys):
    r = run_json(capsys, "hilbert", "--vars", "x,y")["results"]
    assert r["values"][:4] == [1, 3, 6, 10]
    assert (r["e0"], r["dimension"]) == (1, 2)


def test_text_output(capsys):
    assert cli.main(["sop-check", "--problem", str(PROBLEMS / "plane_cusp_tangent.toml")]) == 0
    out = capsys.readouterr().out
    assert "no onset" in out
    assert cli.main(["greg", "--problem", str(CURVE)]) == 0
    assert "kernel in degree 1" in capsys.readouterr().out


@pytest.mark.parametrize("command", cli.COMMANDS)
def test_every_command_on_shipped_problems(command, capsys):
    problem = {
        "koszul": CURVE, "greg": CURVE, "e0": CURVE, "hilbert": CURVE,
        "verify-identities": PROBLEMS / "plane_monomial_params.toml",
    }.get(command, PROBLEMS / "two_cusps.toml")
    rep = run_json(capsys, command, "--problem", str(problem))
    assert rep["command"] == command
    assert rep["results"]


def test_reports_are_deterministic_and_round_trip(tmp_path, capsys):
    first, second, third = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
    for path in (first, second):
        assert cli.main(["chi", "--problem", str(PROBLEMS / "plane_cusp_tangent.toml"), "--json", str(path)]) == 0
    assert first.read_bytes() == second.read_bytes()
    # the echoed problem reproduces the run
    assert cli.main(["chi", "--problem", str(first), "--json", str(third)]) == 0
    assert third.read_bytes() == first.read_bytes()
    capsys.readouterr()


def test_overrides(capsys):
    base = run_json(capsys, "e0", "--problem", str(PROBLEMS / "plane_monomial_params.toml"))
    assert base["results"]["e0"] == 6
    assert base["problem"]["field"] == "rational"
    over = run_json(capsys, "e0", "--problem", str(PROBLEMS / "plane_monomial_params.toml"),
                    "--field", "fp:101", "-a", "x^3", "-a", "y^2")
    assert over["results"]["e0"] == 6
    assert over["problem"]["field"] == "fp:101"


def test_projective_input(capsys):
    r = run_json(capsys, "bezout", "-f", "Y^2*Z - X^3", "-g", "Y*Z^2 - X^3", "--projective", "X,Y,Z", "0,0,1")
    r = r["results"]
    assert (r["f"], r["g"]) == ("-x^3 + y^2", "-x^3 + y")
    assert r["mu"] == 3


@pytest.mark.parametrize("argv, code, text", [
    (["e0", "-a", "x+*y", "-a", "x"], 2, "position"),
    (["e0", "--vars", "x,y", "-a", "x"], 3, "system of parameters"),
    (["bezout", "-f", "x + 1", "-g", "y"], 2, "origin"),
    (["bezout", "-f", "x*y", "-g", "x"], 2, "component"),
    (["hilbert", "--field", "fp:12"], 2, "not prime"),
    (["chi", "--vars", "x,y"], 2, "needs the system"),
])
def test_exit_codes(argv, code, text, capsys):
    assert cli.main(argv) == code
    err = capsys.readouterr().err
    assert text in err


def test_bad_problem_files(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("ring = [")
    assert cli.main(["hilbert", "--problem", str(bad)]) == 2
    bad.write_text('unknown = 1\n')
    assert cli.main(["hilbert", "--problem", str(bad)]) == 2
    bad.write_text('[options]\nwindow = "three"\n')
    assert cli.main(["hilbert", "--problem", str(bad)]) == 2
    assert cli.main(["hilbert", "--problem", str(tmp_path / "missing.toml")]) == 2
    capsys.readouterr()


def test_property_violation_exit_code(monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise NegativeChi("chi = -1 < 0")

    monkeypatch.setattr(cli, "chi_defect", broken)
    assert cli.main(["chi", "--problem", str(CURVE)]) == 4
    assert "NegativeChi" in capsys.readouterr().err


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "multlab.cli", "bezout", "-f", "y^2 - x^3", "-g", "y"],
                         capture_output=True, text=True, check=True).stdout
    assert "mu = 3" in out
