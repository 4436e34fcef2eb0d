import json
import subprocess
import sys

import pytest

from zarkit.cli import main

HE = '{"curves":["H","E"],"gram":[[1,1],[1,-2]],"exceptional":["E"]}'
CHAIN = '{"curves":["H","E1","E2"],"gram":[[1,1,0],[1,-2,2],[0,2,-3]],"exceptional":["E1","E2"]}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_zariski_with_oracle(capsys):
    code, doc, _ = run(capsys, "zariski", "--config", HE, "--divisor", '{"coeffs":{"H":1,"E":1}}', "--oracle")
    assert code == 0 and doc["agreement"] is True
    assert doc["negative"] == {"coeffs": {"E": "1/2"}}


def test_int_zariski_chain(capsys):
    code, doc, _ = run(capsys, "int-zariski", "--config", CHAIN, "--divisor", "[1,3,2]", "--verify")
    assert code == 0
    assert doc["chain"]["steps"] == ["E2", "E1"] and doc["agreement"] is True


def test_config_from_file(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(HE)
    code, doc, _ = run(capsys, "zpos", "--config", str(path), "--divisor", '{"coeffs":{"H":1,"E":2}}', "--oracle")
    assert code == 0 and doc["z_positive"] is False and doc["blocker"] == {"coeffs": {"E": 1}}


def test_output_is_deterministic(capsys):
    argv = ["classify", "--config", '{"curves":["C1","C2"],"gram":[[-2,2],[2,-2]]}', "--divisor", "[2,2]"]
    _, doc, first = run(capsys, *argv)
    _, _, second = run(capsys, *argv)
    assert first == second
    assert doc["audit"]["z_positive"] is True and doc["audit"]["chain_connected"] is False
    assert doc["signature"] == [0, 1, 1]


def test_pretty_flag_before_subcommand(capsys):
    code = main(["--pretty", "wps", "2", "3", "5"])
    out = capsys.readouterr().out
    assert code == 0 and out.startswith("{\n")


def test_wps_matches_documented_output(capsys):
    _, _, out = run(capsys, "wps", "2", "3", "5", "--pa", "17")
    assert out.strip() == '{"m":5,"p_a":2,"q_X":"2/15"}'


def test_pullback_builder(capsys):
    model = '{"target":{"curves":["H"],"gram":[[1]],"exceptional":[]},"points":[{"curve":"H","multiplicity":2}]}'
    code, doc, _ = run(capsys, "pullback", "--model", model, "--divisor", "[1]", "--delta-z", "[0,1,1]")
    assert code == 0 and doc["delta"] == 8
    assert all(doc["checks"].values())


def test_reider_check(capsys):
    code, doc, _ = run(
        capsys, "reider-check", "--config", HE, "--divisor", "[3,0]", "--delta", "4", "--q", "1", "--variant", "II"
    )
    assert code == 0 and doc["regime"] == "D^2 > delta'" and doc["candidates"] == []


def test_extend_check_cone(capsys):
    _, doc, _ = run(capsys, "extend-check", "--cone", "2", "3")
    assert doc["verdict"] == "BoundaryPencil"
    _, doc, _ = run(capsys, "extend-check", "--d2", "17", "--q", "1", "--degree", "3")
    assert doc["verdict"] == "ExtendsAsMorphism"


def test_ruled_and_pic1(capsys):
    _, doc, _ = run(capsys, "ruled", "--gon", "2", "--parity", "Even")
    assert doc["threshold"] == "25/8"
    _, doc, _ = run(capsys, "pic1", "--h2", "1", "--dh", "6", "--d2", "36")
    assert doc["case_ii"]["lower"] == 5


def test_sweep_small(capsys):
    code, doc, _ = run(capsys, "sweep", "--seed", "3", "--cases", "5", "--include", "decomposition")
    assert code == 0 and doc["ok"] and doc["seed"] == 3


@pytest.mark.parametrize(
    "argv, code, kind",
    [
        (["zariski", "--config", "{bad", "--divisor", "[1]"], 2, "input"),
        (["zariski", "--config", "/nonexistent.json", "--divisor", "[1]"], 2, "input"),
        (["zariski", "--config", HE, "--divisor", "[-1,0]"], 3, "precondition"),
        (["int-zariski", "--config", HE, "--divisor", "[1,40]", "--oracle", "--cap", "5"], 4, "cap_exceeded"),
        (["wps", "2", "4", "5"], 2, "input"),
        (["pic1", "--h2", "1", "--dh", "1", "--d2", "2"], 2, "input"),
    ],
)
def test_exit_codes(capsys, argv, code, kind):
    got, doc, _ = run(capsys, *argv)
    assert got == code and doc["error"] == kind


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["reider-check", "--variant", "III"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "zarkit.cli", "wps", "2", "3", "5", "--pa", "17"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["p_a"] == 2
