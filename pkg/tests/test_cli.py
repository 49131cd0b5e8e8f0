import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from ainftorus.cli import COMMANDS, SCHEMA, RunConfig, main, render_report, run

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"

BROKEN = """category broken
objects
  A B
generators
  a : A -> B (1,0)
  b : A -> B (2,0)
  c : A -> B (3,0)
mu
  a -> b
  b -> c
"""


def corpus(name):
    return str(CORPUS / name)


def machine(argv, capsys):
    code = main(argv + ["--format", "machine"])
    return code, json.loads(capsys.readouterr().out)


def test_check_relations_passes(capsys):
    code, rep = machine(["check-relations", corpus("line.ainf")], capsys)
    assert code == 0
    assert rep["schema"] == SCHEMA and rep["ok"] is True
    assert rep["inputs"][0]["sha256"] and "wall_time" not in rep


def test_human_output(capsys):
    assert main(["check-relations", corpus("massey.ainf")]) == 0
    out = capsys.readouterr().out
    assert "result: PASS" in out and out.startswith("artifact ")


def test_failing_check_exits_1(tmp_path, capsys):
    p = tmp_path / "broken.ainf"
    p.write_text(BROKEN)
    assert main(["check-relations", str(p)]) == 1
    cap = capsys.readouterr()
    assert "result: FAIL" in cap.out
    assert cap.err.startswith("FAIL: ")


def test_failed_hypothesis_exits_1(tmp_path, capsys):
    f = tmp_path / "zero.map"
    f.write_text("map f\n")
    code, rep = machine(["verify-thm-b", corpus("line.ainf"), "--f", str(f)], capsys)
    assert code == 1
    assert rep["checks"][-1]["name"] == "verify-thm-b: HypothesisFailed"


@pytest.mark.parametrize("argv", [
    ["homology", "missing.ainf"],
    ["localize", "corpus/line.ainf", "--method", "raw"],
    ["homology", "corpus/line.ainf", "--window=-1..2"],
    ["homology", "corpus/line.ainf", "--x", "Q[0]"],
])
def test_usage_errors_exit_2(argv, capsys, monkeypatch):
    monkeypatch.chdir(ROOT)
    assert main(argv) == 2
    assert "artifact: error:" in capsys.readouterr().err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["homology", corpus("line.ainf"), "--degrees", "3..1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["no-such-command", corpus("line.ainf")])
    assert e.value.code == 2


def test_parse_error_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.ainf"
    p.write_text("category bad\nobjects\n  A\ngenerators\n  a : A -> Q (0,0)\n")
    assert main(["check-relations", str(p)]) == 2


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"degrees": "0..1", "x": "X[0]", "y": "X[2]"}))
    code, rep = machine(["homology", corpus("line.ainf"), "--config", str(cfg)], capsys)
    assert code == 0 and rep["config"]["degrees"] == [0, 1]
    code, rep = machine(["homology", corpus("line.ainf"), "--config", str(cfg), "--degrees=-2..0"], capsys)
    assert rep["config"]["degrees"] == [-2, 0] and rep["config"]["x"] == "X[0]"


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"colour": 1}))
    assert main(["homology", corpus("line.ainf"), "--config", str(cfg)]) == 2


def test_invert_is_repeatable(capsys):
    argv = ["localize", corpus("line.ainf"), "--x", "X[0]", "--y", "X[2]", "--window", "0..3"]
    code, one = machine(argv + ["--invert", "e[0,1]"], capsys)
    code2, two = machine(argv + ["--invert", "e[0,1]", "--invert", "e[1,2]"], capsys)
    assert code == code2 == 0
    assert two["config"]["invert"] == ["e[0,1]", "e[1,2]"]
    assert main(argv + ["--invert", "e[0,1]", "--invert", "e[9,9]"]) == 2
    assert "e[9,9]" in capsys.readouterr().err


def test_timing_flag(capsys):
    code, rep = machine(["check-relations", corpus("units.ainf"), "--timing"], capsys)
    assert code == 0 and rep["wall_time"] >= 0


def test_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["bar", corpus("poly-t2.ainf"), "--format", "machine", "-o", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["command"] == "bar"


def test_render_is_deterministic():
    cfg = RunConfig("koszul", [corpus("poly-t2.ainf")])
    a = render_report(run(cfg), "machine")
    b = render_report(run(RunConfig("koszul", [corpus("poly-t2.ainf")])), "machine")
    assert a == b
    assert render_report(run(cfg), "human") == render_report(run(cfg), "human")


@pytest.mark.parametrize("command,path", [
    ("check-relations", "line.ainf"), ("check-functor", "line.ainf"), ("homology", "twolabel.ainf"),
    ("grothendieck", "units.ainf"), ("cylinder", "units.ainf"), ("mapping-torus", "units.ainf"),
    ("coinvariants", "line.ainf"), ("bar", "poly-t2.ainf"), ("cobar", "cotwo.ainf"), ("koszul", "poly-t2.ainf"),
    ("verify-thm-a", "units.ainf"), ("verify-bar-cobar", "cotwo.ainf"),
])
def test_every_command_runs(command, path, capsys):
    assert command in COMMANDS
    code, rep = machine([command, corpus(path)], capsys)
    assert code == 0, rep["checks"]
    assert rep["command"] == command


def test_module_entry_point():
    env = dict(os.environ, PYTHONHASHSEED="7")
    p = subprocess.run([sys.executable, "-m", "ainftorus", "check-relations", corpus("point.ainf")],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 0 and "result: PASS" in p.stdout
