import json
import os
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from mumford_kdv.cli import (FORMAT_ENV, UsageError, default_golden_dir, golden_suite,
                             main, parse_flows, parse_point, run)
from mumford_kdv.exact import parse_poly, to_json


def json_run(argv):
    rep = run(argv + ["--format", "json"])
    return rep, json.loads(rep.render("json"))


def value(obj, name):
    for r in obj["results"]:
        if r["name"] == name:
            return r["value"]
    raise KeyError(name)


# --- parsing --------------------------------------------------------------------

def test_parse_point():
    a = parse_point("a1=1/2, a2=-3", 2)
    assert a.coords == (Fraction(1, 2), Fraction(-3))


def test_missing_coordinates_default_to_zero():
    assert parse_point("a2=5", 2).coords == (0, 5)


@pytest.mark.parametrize("text", ["a1", "a1=1,a2=x", "a1=1,a3=2", "a1=1,a1=2"])
def test_parse_point_rejects(text):
    with pytest.raises(UsageError):
        parse_point(text, 2)


def test_parse_flows():
    assert parse_flows("1..3") == [1, 2, 3]
    assert parse_flows("2,4") == [2, 4]
    with pytest.raises(UsageError):
        parse_flows("0..2")


# --- exit codes ----------------------------------------------------------------

def test_success_exit_code(capsys):
    assert main(["tau", "-g", "2"]) == 0
    assert "a1" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["tau"], ["tau", "-g", "0"], ["tau", "-g", "two"],
    ["verify", "solver"], ["kdv", "-g", "2", "--flows", "3", "--depth", "1"],
    ["theta", "-g", "2", "--at", "a1=1", "-k", "4"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_theta_point_exits_1_and_names_tau():
    rep, obj = json_run(["solve", "-g", "2", "--eval", "a1=0,a2=0"])
    assert rep.exit_code == 1
    err = obj["error"]
    assert err["kind"] == "theta-divisor"
    assert "tau_2" in err["message"]
    assert err["denominator"] == to_json(parse_poly("a1^3/3 - a2"))
    assert err["point"] == {"a1": "0/1", "a2": "0/1"}


def test_failed_check_exits_1(tmp_path):
    d = tmp_path / "goldens"
    shutil.copytree(default_golden_dir(), d)
    (d / "tau_g2.json").write_text('{"vars":[],"terms":[]}\n')
    rep = run(["verify", "golden", "--dir", str(d)])
    assert rep.exit_code == 1
    failed = [c for c in rep.checks if not c.passed]
    assert [c.name for c in failed] == ["golden.tau_g2.json"]
    assert failed[0].residue["file"] == "tau_g2.json"


# --- outputs -----------------------------------------------------------------------

def test_tau_json():
    rep, obj = json_run(["tau", "-g", "2"])
    assert rep.exit_code == 0
    assert value(obj, "tau_2") == to_json(parse_poly("a1^3/3 - a2"))
    assert obj["command"]["subcommand"] == "tau"


def test_solve_both_routes():
    rep, obj = json_run(["solve", "-g", "2", "--eval", "a1=1,a2=0", "--route", "both"])
    assert rep.exit_code == 0
    assert {c["status"] for c in obj["checks"]} == {"pass"}
    names = [c["name"] for c in obj["checks"]]
    assert "route-equivalence" in names
    p = dict(rep.results)["solution[route=p]"]
    assert list(p.u) == [9, -3, 1]


def test_chi_table_and_single():
    rep = run(["chi", "-g", "2", "-n", "3"])
    assert dict(rep.results)["chi_3"] == parse_poly("a1^3/6 + a2")


def test_aj_and_theta():
    rep = run(["aj", "-g", "1", "--alphas", "2"])
    assert dict(rep.results)["a"] == [Fraction(1, 2)]
    rep = run(["theta", "-g", "2", "--at", "a1=0,a2=-1", "-k", "2"])
    res = dict(rep.results)
    assert res["h0_nonzero[k=2]"] is True and res["in_aj_image[k=2]"] is False


def test_strata_embedding():
    rep = run(["strata", "-g", "3", "--eval", "a1=1,a2=0", "--embed", "1"])
    res = dict(rep.results)
    assert rep.exit_code == 0 and res["stratum"] == 2 and res["regular"] is False


def test_kdv_and_wronskian_commands():
    assert run(["kdv", "-g", "2"]).exit_code == 0
    rep = run(["wronskian", "-g", "2"])
    assert rep.exit_code == 0 and dict(rep.results)["sign"] == -1


def test_verify_topic():
    rep = run(["verify", "chi", "-g", "2"])
    assert rep.exit_code == 0 and rep.checks


def test_text_rendering_mentions_checks(capsys):
    main(["solve", "-g", "1", "--eval", "a1=1"])
    out = capsys.readouterr().out
    assert "[pass] spectral-identity[route=p]" in out


# --- determinism and environment ---------------------------------------------------

def test_seeded_runs_are_byte_identical(capsys):
    argv = ["verify", "jacobian", "-g", "2", "--seed", "7", "--samples", "10", "--format", "json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_environment_selects_default_format(monkeypatch, capsys):
    monkeypatch.setenv(FORMAT_ENV, "json")
    main(["tau", "-g", "1"])
    obj = json.loads(capsys.readouterr().out)
    assert obj["results"][0]["name"] == "tau_1"
    main(["tau", "-g", "1", "--format", "text"])
    assert capsys.readouterr().out.startswith("tau_1 = ")


# --- goldens ---------------------------------------------------------------------

def test_packaged_goldens_pass():
    rep = golden_suite()
    assert rep.ok
    names = {c.name for c in rep.checks}
    assert {"golden.tau_g2.json", "golden.tau_g3.json", "golden.tau_g4.json",
            "golden.rho_g2.json", "golden.rho_g3.json", "golden.uvw_g3.json"} <= names
    assert any(n.startswith("note.uvw_g3") for n, _ in rep.results)


def test_unknown_golden_file_fails(tmp_path):
    (tmp_path / "bogus_g2.json").write_text("{}\n")
    rep = golden_suite(tmp_path)
    assert not rep.ok


def test_empty_golden_dir_is_an_error(tmp_path):
    assert golden_suite(tmp_path).exit_code == 1


# --- module entry point -------------------------------------------------------------

def test_module_entry_point():
    env = dict(os.environ, **{FORMAT_ENV: "json"})
    proc = subprocess.run([sys.executable, "-m", "mumford_kdv", "tau", "-g", "2"],
                          capture_output=True, text=True, env=env, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][0]["value"] == to_json(parse_poly("a1^3/3 - a2"))
