import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from pqg import cli

FIXTURES = Path(__file__).parent / "fixtures"
ALL = sorted(p.name for p in FIXTURES.glob("*.json"))
HOPF_INPUTS = ["vecz2.json", "vecz3.json", "pairgroupoid3.json", "matrixunits2.json"]


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", ALL)
def test_verify_every_fixture(capsys, name):
    extra = ["--degree", "2"] if name.startswith(("one_vertex", "podles")) else []
    code, out, _ = run(capsys, "verify", FIXTURES / name, *extra)
    assert code == 0, out
    doc = json.loads(out)
    assert doc["ok"] and doc["failures"] == 0


@pytest.mark.parametrize("name", ALL)
def test_documents_round_trip_byte_for_byte(name):
    once = cli.dumps(cli.to_document(cli.parse_spec(FIXTURES / name)))
    twice = cli.dumps(cli.to_document(cli.parse_document(json.loads(once))))
    assert once == twice


@pytest.mark.parametrize("verb", ["verify", "corep-report", "characters"])
def test_output_is_byte_stable(capsys, verb):
    first = run(capsys, verb, FIXTURES / "vecz3.json")[1]
    second = run(capsys, verb, FIXTURES / "vecz3.json")[1]
    assert first == second


@pytest.mark.parametrize("name", HOPF_INPUTS)
def test_corep_report_and_characters(capsys, name):
    assert run(capsys, "corep-report", FIXTURES / name)[0] == 0
    assert run(capsys, "characters", FIXTURES / name, "--z", "-1,0,1,2")[0] == 0


def test_zeroth_character_is_the_counit(capsys):
    code, out, _ = run(capsys, "characters", FIXTURES / "vecz3.json", "--z", "-1,0,1,2")
    assert code == 0
    table = json.loads(out)["tables"]["characters"]
    assert sorted(table["functionals"]) == ["-1", "0", "1", "2"]
    # for a group every character is trivial, so all f_z agree with f_0 = ε
    assert set(table["functionals"]["0"].values()) == {"1"}
    assert all(table["functionals"][z] == table["functionals"]["0"] for z in ("-1", "1", "2"))


def test_build_tannaka_writes_reusable_data(capsys, tmp_path):
    target = tmp_path / "z3.json"
    code, out, _ = run(capsys, "build-tannaka", FIXTURES / "vecz3.json", "-o", target)
    assert code == 0
    assert json.loads(out)["tables"]["dimension"] == 27
    assert json.loads(target.read_text())["kind"] == "partial_hopf"
    assert run(capsys, "verify", target)[0] == 0


def test_failing_input_exits_nonzero_with_witness(capsys, tmp_path):
    doc = json.loads(cli.dumps(cli.to_document(cli.parse_spec(FIXTURES / "pairgroupoid3.json"))))
    key = next(iter(doc["counit"]))
    doc["counit"][key] = ["2"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", bad)
    assert code == 1
    rep = json.loads(out)
    assert rep["failures"] > 0
    failed = [c for r in rep["reports"] for c in r["checks"] if c["failed"]]
    assert failed and all(a["witnesses"] for a in failed)


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", FIXTURES / "vecz2.json", "--format", "text")
    assert code == 0
    assert out.rstrip().endswith("result: PASS (0 failures)")


def test_decimal_floats_are_rejected(capsys, tmp_path):
    doc = json.loads((FIXTURES / "one_vertex_q1.json").read_text())
    text = json.dumps(doc).replace('"1"', "1.0", 1)
    assert "1.0" in text
    path = tmp_path / "float.json"
    path.write_text(text)
    code, _, err = run(capsys, "verify", path, "--degree", "2")
    assert code == 2 and "float" in err
    with pytest.raises(SystemExit) as exc:
        cli.main(["walk", "one-vertex", "--q", "0.5"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["frobnicate", "x.json"],
    ["verify", str(FIXTURES / "vecz2.json"), "--bogus"],
    ["walk", "podles", "--q", "1/2", "--x", "0", "--window", "-3:3", "--z", "1"],
    ["walk", "podles", "--q", "1/2", "--x", "0", "--window", "3:-3"],
])
def test_bad_command_lines_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["walk", "podles", "--q", "1/2", "--x", "0"],
    ["present", "--dynamical", "--q", "1/2", "--x", "0", "--window", "-4:4"],
    ["present", "--dynamical", "--q", "1/2", "--x", "0", "--window", "-1:1", "--degree", "3"],
])
def test_missing_window_or_degree_exits_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("pqg: error")


def test_presentation_needs_a_degree(capsys, tmp_path):
    target = tmp_path / "p.json"
    assert run(capsys, "present", FIXTURES / "one_vertex_q1.json", "-o", target)[0] == 0
    code, out, err = run(capsys, "verify", target)
    assert code == 2 and out == "" and "--degree" in err
    assert run(capsys, "verify", target, "--degree", "2")[0] == 0


def test_walk_then_present(capsys, tmp_path):
    walk = tmp_path / "walk.json"
    code, _, _ = run(capsys, "walk", "podles", "--q", "1/2", "--x", "0", "--window", "-3:3", "-o", walk)
    assert code == 0
    code, out, _ = run(capsys, "present", walk, "--check-hopf", "--degree", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["tables"]["presentation"]["generators"] == 12 ** 2
    statuses = doc["reports"][0]["data"]["status-counts"]
    assert "failed" not in statuses and "certified" in statuses


def test_dynamical_present(capsys):
    code, out, _ = run(capsys, "present", "--dynamical", "--q", "1/2", "--x", "0", "--window", "-4:4",
                       "--degree", "3")
    assert code == 0 and json.loads(out)["ok"]


def test_console_script_honours_thread_cap(tmp_path):
    env = dict(os.environ, PQG_THREADS="2")
    args = [sys.executable, "-m", "pqg", "present", str(FIXTURES / "one_vertex_q1.json"),
            "--check-hopf", "--degree", "2"]
    threaded = subprocess.run(args, env=env, capture_output=True, check=False)
    env["PQG_THREADS"] = "1"
    serial = subprocess.run(args, env=env, capture_output=True, check=False)
    assert threaded.returncode == serial.returncode == 0
    assert threaded.stdout == serial.stdout
