import json
import subprocess
import sys

import pytest

from aflogic import model_to_json
from aflogic.cli import run
from tests.conftest import GRANT_ALPHA


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def m0_file(tmp_path, m0):
    path = tmp_path / "m0.json"
    path.write_text(model_to_json(m0))
    return str(path)


def test_parse_round_trip(capsys):
    code, out, _ = invoke(capsys, "parse", "--formula", "p&[a]q", "--agents", "a")
    assert code == 0
    assert out.strip() == "p & [a] q"


def test_parse_action(capsys):
    code, out, _ = invoke(capsys, "parse", "--action", "?p ; L{a}(?q)", "--agents", "a")
    assert code == 0
    assert out.strip() == "?p ; L{a}(?q)"


def test_parse_error_exit_code(capsys):
    code, _, err = invoke(capsys, "parse", "--formula", "p &", "--agents", "a")
    assert code == 2
    assert "error" in err


def test_check_grant_goal(capsys, m0_file):
    formula = f"[{GRANT_ALPHA}] [ed] p"
    code, out, _ = invoke(capsys, "check", "--model", m0_file, "--class", "k",
                          "--formula", formula)
    assert code == 0
    assert out.strip() == "true"
    code, out, _ = invoke(capsys, "check", "--model", m0_file, "--class", "k",
                          "--formula", formula, "--via-reduction")
    assert out.strip() == "true"


def test_check_false(capsys, m0_file):
    code, out, _ = invoke(capsys, "check", "--model", m0_file, "--class", "k",
                          "--formula", "[ed] p")
    assert out.strip() == "false"


def test_tau_emits_action_model_json(capsys):
    code, out, _ = invoke(capsys, "tau", "--class", "s5", "--action", "?p",
                          "--agents", "a,b")
    assert code == 0
    data = json.loads(out)
    assert sorted(data) == ["agents", "points", "pre", "relations", "states"]
    assert len(data["states"]) == 2
    for pairs in data["relations"].values():
        assert len(pairs) == 4  # universal on two points


def test_tau_dot_output(capsys):
    code, out, _ = invoke(capsys, "tau", "--class", "k", "--action", "?p",
                          "--agents", "a", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")


def test_exec_round_trips_through_loader(capsys, m0_file, tmp_path):
    out_file = tmp_path / "result.json"
    code, _, _ = invoke(capsys, "exec", "--model", m0_file, "--class", "k",
                        "--action", "L{ed}(?p)", "--out", str(out_file))
    assert code == 0
    from aflogic import model_from_json
    result = model_from_json(out_file.read_text())
    assert result.points


def test_exec_with_action_model_file(capsys, m0_file, tmp_path):
    code, out, _ = invoke(capsys, "tau", "--class", "k", "--action", "L{ed}(?p)",
                          "--agents", "ed,james,tim")
    am_file = tmp_path / "act.json"
    am_file.write_text(out)
    code, out, _ = invoke(capsys, "exec", "--model", m0_file, "--class", "k",
                          "--action-model", str(am_file))
    assert code == 0
    assert json.loads(out)["points"]


def test_bisim_models(capsys, m0_file):
    code, out, _ = invoke(capsys, "bisim", "--model", m0_file, "--model", m0_file)
    assert code == 0
    assert out.strip() == "true"
    code, out, _ = invoke(capsys, "bisim", "--model", m0_file, "--model", m0_file,
                          "--point", "w1", "--point", "w2")
    assert out.strip() == "false"
    code, out, _ = invoke(capsys, "bisim", "--model", m0_file, "--model", m0_file,
                          "--point", "w1", "--point", "w2", "--n", "0")
    assert out.strip() == "false"
    code, out, _ = invoke(capsys, "bisim", "--model", m0_file, "--model", m0_file,
                          "--point", "w1", "--point", "w2", "--agents-b", "")
    assert out.strip() == "true"


def test_bisim_action_models(capsys, tmp_path):
    a_file, b_file = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert run(["tau", "--class", "k", "--action", "?p", "--agents", "a",
                "--out", a_file]) == 0
    assert run(["tau", "--class", "k", "--action", "?~~p", "--agents", "a",
                "--out", b_file]) == 0
    capsys.readouterr()
    code, out, _ = invoke(capsys, "bisim", "--action-model", a_file,
                          "--action-model", b_file, "--class", "k")
    assert code == 0
    assert out.strip() == "true"


def test_valid(capsys):
    code, out, _ = invoke(capsys, "valid", "--class", "s5", "--formula",
                          "[a] p -> p", "--agents", "a")
    assert out.strip() == "true"
    code, out, _ = invoke(capsys, "valid", "--class", "k", "--formula",
                          "[a] p -> p", "--agents", "a")
    assert out.strip() == "false"


def test_normal_form_commands(capsys):
    for cmd in ("dnf", "adnf", "explicit"):
        code, out, _ = invoke(capsys, cmd, "--formula", "<a> p", "--agents", "a")
        assert code == 0
        assert out.strip()


def test_correspond_command(capsys, tmp_path):
    code = run(["tau", "--class", "k", "--action", "L{a}(?p)", "--agents", "a,b",
                "--out", str(tmp_path / "act.json")])
    assert code == 0
    code, out, _ = invoke(capsys, "correspond", "--action-model",
                          str(tmp_path / "act.json"), "--point", "Lt",
                          "--depth", "1", "--class", "k")
    assert code == 0
    assert out.strip().startswith("?true")


def test_synth_with_verify(capsys):
    code, out, _ = invoke(capsys, "synth", "--class", "k", "--goal", "[ed] p",
                          "--agents", "ed", "--verify", "--trials", "50",
                          "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert "0 counterexamples" in lines[-1]


def test_deterministic_output(capsys, m0_file):
    runs = []
    for _ in range(2):
        code, out, _ = invoke(capsys, "exec", "--model", m0_file, "--class", "k",
                              "--action", GRANT_ALPHA)
        assert code == 0
        runs.append(out)
    assert runs[0] == runs[1]


def test_usage_error_exit_code(capsys, m0_file):
    code, _, err = invoke(capsys, "exec", "--model", m0_file, "--class", "k")
    assert code == 2


def test_missing_model_file(capsys):
    code, _, err = invoke(capsys, "check", "--model", "/nonexistent.json",
                          "--class", "k", "--formula", "p")
    assert code == 2


def test_budget_exit_code(capsys):
    code, _, err = invoke(capsys, "reduce", "--class", "k", "--formula",
                          "[L{a}(?p + ?q) ; L{b}(?p)] ([a] p & [b] q)",
                          "--agents", "a,b", "--budget", "5")
    assert code == 4


def test_console_script_installed():
    proc = subprocess.run(["aflogic", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "usage" in proc.stdout
