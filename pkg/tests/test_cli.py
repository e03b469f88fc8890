import json
import shutil

import pytest

from conftest import FIXTURES
from eqpoincare.cli import main, run


def cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def cli_json(capsys, *argv):
    code, out = cli(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_ring_sympow(capsys):
    code, out = cli_json(capsys, "ring", "sympow", "--group", "z2", "--class", "[G/e]", "--k", "2")
    assert code == 0 and out["result"] == "1 + [G/e]"


def test_ring_mul_text(capsys):
    code, out = cli(capsys, "ring", "mul", "--group", "z2", "--a", "[G/G]_{a1}", "--b", "[G/e]")
    assert code == 0
    assert "result:\n  [G/e]\n" in out
    assert "warnings: none" in out


def test_poincare_of_z6_fixture(capsys):
    code, out = cli_json(capsys, "poincare", "--resolution", "z6_x6")
    assert code == 0
    assert out["result"]["text"] == "(1 - t1^6*t2^6*t3^6*t4^6*t5^6*t6^6)^{-[G/G]_{a1}}"
    assert "stratum Euler characteristics are declared, unverified" in out["notes"]


def test_factor_round_trip(capsys, tmp_path):
    text = "(1 - t1^2)^{[G/e]}*(1 - t1^2)^{-1}*(1 - t1^3)^{-[G/e]}"
    code, out = cli_json(capsys, "series", "expand", "--group", "z2", "--factored", text, "--arity", "1",
                         "--bound", "9")
    assert code == 0
    path = tmp_path / "s.json"
    path.write_text(json.dumps(out["result"]))
    code, out = cli_json(capsys, "series", "factor", "--group", "z2", "--series", str(path))
    assert code == 0 and out["result"]["text"] == text


def test_zeta_recover_warns_for_scalar_fixture(capsys):
    code, out = cli_json(capsys, "zeta", "recover", "--resolution", "z6_x6_action1")
    assert code == 0
    assert any("cannot be decided from the series alone" in w for w in out["warnings"])


def test_zeta_from_resolution(capsys):
    code, out = cli_json(capsys, "zeta", "from-resolution", "--resolution", "z2_scalar")
    assert code == 0
    assert out["result"]["zeta"]["text"] == "(1 - t^2)^{-1/2*[G/e]}"
    assert out["result"]["zeta_tilde"]["text"] == "(1 - t)^{-[G/e]}"


def test_non_integral_zeta_tilde_fails(capsys):
    code, out = cli(capsys, "zeta", "from-resolution", "--resolution", "z2_reflection_divisorial")
    assert code == 1 and "not an integer" in out


def test_statement1(capsys):
    code, out = cli_json(capsys, "check", "statement1", "--resolution", "z2_reflection_divisorial",
                         "--bound", "10")
    assert code == 0 and out["result"]["equal"]


def test_resolution_commands(capsys):
    code, out = cli_json(capsys, "resolution", "mmatrix", "--resolution", "z2_reflection_divisorial")
    assert out["result"]["m"] == [[1, 1, 1], [1, 2, 1], [1, 1, 2]]
    code, out = cli_json(capsys, "resolution", "omega", "--resolution", "z2_reflection_divisorial")
    assert {r["stratum"]: r["omega"] for r in out["result"]}["E1"] == [3]


def test_invalid_resolution_exits_1(capsys, tmp_path):
    data = json.loads((FIXTURES / "resolutions" / "z2_reflection_divisorial.json").read_text())
    data["group"] = str(FIXTURES / "groups" / "z2.json")
    data["strata"][-1]["H"] = ["e", "g"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out = cli(capsys, "resolution", "validate", "--resolution", str(path))
    assert code == 1
    assert "failure: stratum E1: H does not stabilize component E1" in out


@pytest.mark.parametrize("argv", [
    ["ring", "mul", "--group", "z2", "--a", "[G/Q]", "--b", "1"],
    ["series", "expand", "--group", "z2", "--factored", "(1 - x)^{-1}", "--bound", "3"],
    ["poincare", "--resolution", "no_such_file"],
    ["group", "inspect", "--group", "no_such_group"],
    ["ring", "frobnicate"],
])
def test_input_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_unreadable_json_exits_2(capsys, tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text("{not json")
    assert main(["group", "inspect", "--group", str(bad)]) == 2


def test_json_and_text_agree(capsys):
    argv = ["ring", "mul", "--group", "s3", "--a", "[G/H1]", "--b", "[G/H1]"]
    _, text = cli(capsys, *argv)
    _, data = cli_json(capsys, *argv)
    assert f"  {data['result']}\n" in text
    assert data["result"] == "[G/e] + [G/H1]"


def test_output_is_deterministic_and_timing_is_opt_in(capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"o{i}.json"
        assert main(["fixtures", "run", "--format", "json", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert b"timing" not in outs[0]
    code, rep, _ = run(["group", "inspect", "--group", "z2", "--timing"])
    assert code == 0 and rep.timing is not None


def test_fixtures_run_reports_named_failures(capsys, tmp_path):
    shutil.copytree(FIXTURES, tmp_path / "fx")
    manifest = tmp_path / "fx" / "manifest.json"
    data = json.loads(manifest.read_text())
    data["rings"][0]["expect"] = "1"
    manifest.write_text(json.dumps(data))
    (tmp_path / "fx" / "resolutions" / "z2_scalar.json").write_text("{broken")
    code, out = cli(capsys, "fixtures", "run", "--manifest", str(manifest))
    assert code == 1
    fails = [line for line in out.splitlines() if "FAIL" in line or "ERROR" in line]
    assert any("z2_scalar" in line for line in fails)
    assert any("ring" in line for line in fails)
