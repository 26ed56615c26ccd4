import io as _io
import json
import subprocess
import sys

import jsonschema
import pytest

from elp import io
from elp.cli import OUTPUT_SCHEMAS, run
from elp.fixtures import fixture_path, load_fixture

FIG3 = "mu X. L{b}(phi |{a} L{a}(psi |{b} L{b}(X)))"


def cli(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def cli_json(command, *rest, code=0):
    got, out, err = cli("--json", command, *rest)
    assert got == code, err
    data = json.loads(out)
    jsonschema.validate(data, OUTPUT_SCHEMAS["error" if "error" in data else command])
    return data


@pytest.mark.parametrize("command, args", [
    ("parse", ["L{a}(?p)"]),
    ("parse", ["--formula", "K{a} p"]),
    ("compile", ["L{b}(p |{a} L{a}(?q))"]),
    ("update", ["fixture:fig6", "--program", "?p"]),
    ("update", ["fixture:fig6", "--action", "L{a,b}(?p)"]),
    ("bisim", ["fixture:fig3", "fixture:fig13"]),
    ("abisim", ["b", "fixture:mayread_alpha", "fixture:mayread_beta"]),
    ("synthesize", ["fixture:fig3", "--verify"]),
    ("synthesize", ["fixture:fig2", "--method", "tree"]),
    ("synthesize", ["fixture:read", "--method", "s5"]),
    ("classify", ["fixture:fig3"]),
    ("classify", [FIG3]),
    ("witness", ["2"]),
    ("check", ["L{a}(?p)"]),
    ("check", ["fixture:fig2"]),
    ("check", ["fixture:fig6"]),
    ("check", ["--random", "2"]),
    ("mc", ["fixture:fig6", "K{b} p"]),
    ("prove", ["K{a} p -> p"]),
    ("export-dot", ["fixture:fig3", "--graph", "t-prime"]),
])
def test_json_outputs_validate(command, args):
    cli_json(command, *args)


def test_compile_example_counts_two_events():
    data = cli_json("compile", "L{b}(p |{a} L{a}(?q))")
    assert len(data["states"]) == 2
    jsonschema.validate(data, io.ACTION_SCHEMA)


def test_bisim_text_output():
    code, out, _ = cli("bisim", str(fixture_path("fig3")), str(fixture_path("fig13")))
    assert (code, out.strip()) == (0, "bisimilar")
    code, out, _ = cli("bisim", "fixture:fig1", "fixture:fig2")
    assert (code, out.strip()) == (0, "not bisimilar")


def test_update_eliminating_actual(tmp_path):
    state = tmp_path / "state.json"
    io.save(load_fixture("fig6"), state)
    code, _, err = cli("update", str(state), "--program", "L{a}(?~p)")
    assert code == 1 and err.startswith("ActualEliminated")
    data = cli_json("update", str(state), "--program", "L{a}(?~p)", code=1)
    assert data["error"] == "ActualEliminated"


def test_domain_errors_exit_one():
    assert cli("compile", "?p ^ ?q")[0] == 1
    assert cli("bisim", "fixture:nope", "fixture:fig2")[0] == 1
    assert cli("compile", "L{a}(?p")[0] == 1
    assert cli("synthesize", "fixture:fig3", "--method", "tree")[0] == 1
    assert cli("check", "?p ^ ?q")[0] == 1
    assert cli("mc", "fixture:fig2", "p")[0] == 1


def test_usage_errors_exit_two():
    assert cli()[0] == 2
    assert cli("frobnicate")[0] == 2
    assert cli("witness", "two")[0] == 2
    assert cli("--oracle", "s5", "prove", "p")[0] == 2
    assert cli("witness", "0")[0] == 2
    assert cli("update", "fixture:fig6")[0] == 2


def test_missing_file(tmp_path):
    assert cli("bisim", str(tmp_path / "x.json"), "fixture:fig2")[0] == 1


def test_mc_not_applicable():
    code, out, _ = cli("mc", "fixture:fig6", "K{b} chi", "--at", "t")
    assert code == 0 and out.strip() == "not applicable"
    data = cli_json("mc", "fixture:fig6", "K{b} chi", "--at", "t")
    assert data["applicable"] is False and data["holds"] is None


def test_synthesize_verify_round_trip():
    data = cli_json("synthesize", "fixture:fig3", "--verify")
    assert data["verified"] is True and data["mu_free"] is False
    code, out, _ = cli("bisim", data["program"], "fixture:fig3")
    assert out.strip() == "bisimilar"


def test_classify_and_witness():
    assert cli_json("classify", FIG3)["dependent_mu"] == 1
    assert cli_json("classify", "fixture:fig3")["dependent_mu"] is None
    data = cli_json("witness", "3")
    assert data["k"] == data["depth"] == data["dependent_mu"] == 3
    assert cli("witness", "3", "--cap", "2")[0] == 1


def test_check_random_is_seeded():
    a = cli_json("check", "--random", "3")
    b = cli("--json", "--seed", "0", "check", "--random", "3")[1]
    assert a == json.loads(b) and a["seed"] == 0
    assert all(v["failures"] == 0 for v in a["checks"].values())


def test_compile_dot_and_export(tmp_path):
    dot = tmp_path / "m.dot"
    code, _, _ = cli("compile", FIG3, "--dot", str(dot))
    assert code == 0 and dot.read_text().startswith("digraph")
    out = tmp_path / "g.dot"
    code, stdout, _ = cli("export-dot", "fixture:fig3", "--graph", "t", "-o", str(out))
    assert code == 0 and "->" in out.read_text()
    code, stdout, _ = cli("export-dot", "fixture:fig2")
    assert code == 0 and stdout.startswith("digraph")


def test_oracle_selection(monkeypatch):
    monkeypatch.setenv("ELP_ORACLE", "syntactic")
    assert cli("bisim", "?p", "?(p & p)")[1].strip() == "not bisimilar"
    assert cli("--oracle", "kd45", "bisim", "?p", "?(p & p)")[1].strip() == "bisimilar"
    monkeypatch.delenv("ELP_ORACLE")
    assert cli("bisim", "?p", "?(p & p)")[1].strip() == "bisimilar"


def test_agents_flag_widens_compilation():
    data = cli_json("compile", "L{a}(?p)")
    assert data["agents"] == ["a"]
    got, out, _ = cli("--json", "--agents", "a,b", "compile", "L{a}(?p)")
    assert json.loads(out)["agents"] == ["a", "b"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "elp.cli", "parse", "L{a}(?p)"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "L{a}(?p)"
