"""CLI tests: family files, commands, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from zflab import cli
from zflab.errors import EmptyFamily, ParseError
from zflab.hfs import EMPTY, make_set


def write_family(tmp_path, literals, name="family.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"family": literals}))
    return str(path)


def run_cli(args):
    return cli.main(list(args))


def test_load_family(tmp_path):
    fam = cli.load_family(write_family(tmp_path, ["{{}}", "{{},{{}}}"]))
    assert len(fam) == 2
    assert not fam.has_empty_member


def test_load_family_flags_empty_member(tmp_path):
    fam = cli.load_family(write_family(tmp_path, ["{}", "{{}}"]))
    assert fam.has_empty_member


def test_load_family_errors(tmp_path):
    with pytest.raises(EmptyFamily):
        cli.load_family(write_family(tmp_path, []))
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    with pytest.raises(ParseError):
        cli.load_family(str(bad))
    nolist = tmp_path / "nolist.json"
    nolist.write_text('{"family": "{{}}"}')
    with pytest.raises(ParseError):
        cli.load_family(str(nolist))
    nonstr = tmp_path / "nonstr.json"
    nonstr.write_text('{"family": [3]}')
    with pytest.raises(ParseError):
        cli.load_family(str(nonstr))


def test_verify_reports_the_expected_sizes(tmp_path, capsys):
    fam = write_family(tmp_path, ["{{}}", "{{},{{}}}"])
    status = run_cli(["verify", "--family", fam, "--kind", "wellorder",
                      "--u2", "union"])
    report = json.loads(capsys.readouterr().out)
    assert status == 0
    assert report["ok"] is True
    assert report["pipeline"]["fc_size"] == 2
    assert report["cross_checks"]["oracle_fc_match"] is True
    assert report["cross_checks"]["route_agreement"] is True
    assert report["cross_checks"]["induced_order_roundtrip"] is True
    assert report["equivalence"]["agree"] is True
    assert report["failures"] == []


def test_verify_literal_empty_qs_is_a_finding_not_a_failure(tmp_path, capsys):
    fam = write_family(tmp_path, ["{{}}", "{{},{{}}}"])
    status = run_cli(["verify", "--family", fam, "--u2", "literal"])
    report = json.loads(capsys.readouterr().out)
    assert status == 0
    assert report["pipeline"]["q_s_empty"] is True
    assert any("empty Q_S" in f for f in report["findings"])
    assert report["failures"] == []


def test_verify_warns_about_empty_members(tmp_path, capsys):
    fam = write_family(tmp_path, ["{}", "{{}}"])
    status = run_cli(["verify", "--family", fam])
    report = json.loads(capsys.readouterr().out)
    assert status == 0
    assert report["warnings"] == ["family contains the empty set"]
    assert report["pipeline"]["qs_size"] == 0
    assert report["equivalence"]["agree"] is True


def test_enumerate_dumps_orders_and_choices(tmp_path, capsys):
    fam = write_family(tmp_path, ["{{}}", "{{},{{}}}"])
    status = run_cli(["enumerate", "--family", fam, "--kind", "pol"])
    report = json.loads(capsys.readouterr().out)
    assert status == 0
    assert [m["order_count"] for m in report["members"]] == [1, 2]
    assert report["q_s"]["size"] == 2
    assert report["f_c"]["size"] == 2
    assert len(report["oracle_choice_functions"]) == 2


def test_fuzz_is_deterministic(tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert run_cli(["fuzz", "--seed", "7", "--trials", "40",
                    "--out", str(out1)]) == 0
    assert run_cli(["fuzz", "--seed", "7", "--trials", "40",
                    "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["fuzz"]["checked"] == 40
    assert report["ok"] is True


def test_fuzz_seed_changes_the_stream(tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    run_cli(["fuzz", "--seed", "7", "--trials", "40", "--out", str(out1)])
    run_cli(["fuzz", "--seed", "8", "--trials", "40", "--out", str(out2)])
    r1 = json.loads(out1.read_text())
    r2 = json.loads(out2.read_text())
    assert r1["fuzz"]["sample_families"] != r2["fuzz"]["sample_families"]


def test_fuzz_allow_empty_exercises_empty_members(tmp_path):
    out = tmp_path / "r.json"
    assert run_cli(["fuzz", "--seed", "42", "--trials", "60",
                    "--allow-empty", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["fuzz"]["families_with_empty_member"] > 0
    assert report["ok"] is True


def test_intervals_demo_and_literals(capsys):
    status = run_cli(["intervals", "[1,3]", "(0,+inf)", "--trials", "25"])
    report = json.loads(capsys.readouterr().out)
    assert status == 0
    demo = {d["interval"]: d["choice_value"] for d in report["demo"]}
    assert demo == {"[1,3]": "2", "(-inf,5]": "4", "(0,+inf)": "1",
                    "(-inf,+inf)": "0"}
    assert all(d["satisfies_condition"] for d in report["demo"])
    assert report["sample_checks"] == {"trials": 25, "passed": 25}
    assert report["intervals"][0]["choice_value"] == "2"


def test_text_format_is_deterministic(tmp_path):
    fam = write_family(tmp_path, ["{{}}"])
    out1 = tmp_path / "a.txt"
    out2 = tmp_path / "b.txt"
    run_cli(["verify", "--family", fam, "--format", "text", "--out", str(out1)])
    run_cli(["verify", "--family", fam, "--format", "text", "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()
    assert "ok: true" in out1.read_text()


def test_missing_family_flag_fails(capsys):
    assert run_cli(["verify"]) == 2
    assert "family" in capsys.readouterr().err


def test_missing_family_file_is_a_diagnostic(tmp_path, capsys):
    status = run_cli(["verify", "--family", str(tmp_path / "nope.json")])
    report = json.loads(capsys.readouterr().out)
    assert status == 2
    assert report["error"]["type"] == "IoError"
    assert report["ok"] is False


def test_empty_family_file_is_a_diagnostic(tmp_path, capsys):
    fam = write_family(tmp_path, [])
    status = run_cli(["verify", "--family", fam])
    report = json.loads(capsys.readouterr().out)
    assert status == 2
    assert report["error"]["type"] == "EmptyFamily"


def test_env_caps_apply_and_flags_override(tmp_path, capsys, monkeypatch):
    fam = write_family(tmp_path, ["{{}}", "{{},{{}}}"])
    monkeypatch.setenv("ZFLAB_CAPS", "3,10")
    status = run_cli(["verify", "--family", fam])
    report = json.loads(capsys.readouterr().out)
    assert status == 2
    assert report["config"]["powerset_cap"] == 3
    assert report["error"]["type"] == "CapExceeded"
    status = run_cli(["verify", "--family", fam, "--powerset-cap", "20",
                      "--product-cap", "1000000"])
    report = json.loads(capsys.readouterr().out)
    assert status == 0
    assert report["config"]["powerset_cap"] == 20


def test_bad_env_caps_rejected(capsys, monkeypatch):
    monkeypatch.setenv("ZFLAB_CAPS", "1,2,3")
    assert run_cli(["fuzz", "--trials", "1"]) == 2
    assert "ZFLAB_CAPS" in capsys.readouterr().err


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "zflab.cli", "intervals", "--trials", "5"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True
