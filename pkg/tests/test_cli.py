import json

import pytest

from orbitforge import cli


def run(argv):
    return cli.main(argv)


def test_verify_single_suite_passes(capsys):
    assert run(["verify", "--suite", "metric", "--model", "rat"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_verify_tamper_negative_control(capsys):
    assert run(["verify", "--suite", "operator", "--model", "rat",
                "--tamper", "E0"]) == 1
    out = capsys.readouterr().out
    assert "FAIL E0_scalar" in out


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run(["verify", "--suite", "bogus"])
    assert exc.value.code == 2


def test_bad_rational_exit_code():
    with pytest.raises(SystemExit) as exc:
        run(["verify", "--suite", "metric", "--mu", "pi"])
    assert exc.value.code == 2


def test_eval_tau_rational(capsys):
    assert run(["eval", "tau", "--model", "rat", "--x", "1,2,3,5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["tau"]["tau2"] == "39"
    assert payload["long_factor"] == "967680"


def test_eval_tau_trig_identity_point(capsys):
    assert run(["eval", "tau", "--model", "trig", "--x", "0,0,0,0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert [payload["tau"][n] for n in
            ("tau1", "tau2", "tau3", "tau4")] == ["24", "24", "96", "96"]


def test_eval_potential_boundary_singularity(capsys):
    assert run(["eval", "potential", "--model", "rat",
                "--x", "1,1,1,1"]) == 1


def test_eval_potential_generic_point(capsys):
    assert run(["eval", "potential", "--model", "rat", "--x", "1,2,3,5",
                "--mu", "1/3", "--nu", "1/5", "--omega", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "/" in payload["potential"] or payload["potential"].isdigit()


def test_spectrum_deterministic_output(capsys):
    assert run(["spectrum", "--model", "rat", "--n", "8"]) == 0
    first = capsys.readouterr().out
    assert run(["spectrum", "--model", "rat", "--n", "8"]) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    degs = [row["degeneracy"] for row in payload["levels"]]
    assert degs == [1, 1, 1, 2, 3]


def test_spectrum_trig_labels(capsys):
    assert run(["spectrum", "--model", "trig", "--n", "2",
                "--mu", "1/3", "--nu", "1/5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    eps = {tuple(row["label"]): row["epsilon"]
           for row in payload["labels"]}
    assert eps[(1, 0, 0, 0)] == "-58/15"


def test_eigenfunctions_appendix_match(capsys):
    assert run(["eigenfunctions", "--model", "rat", "--n", "2",
                "--mu", "1/3", "--nu", "1/5", "--omega", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["entries"]) == 5
    assert all(e["appendix_match"] == "pass" for e in payload["entries"])


def test_json_file_output(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert run(["verify", "--suite", "metric", "--model", "trig",
                "--json", str(target)]) == 0
    payload = json.loads(target.read_text())
    assert payload["status"] == "pass"
    assert all(c["status"] == "pass" for c in payload["checks"])
