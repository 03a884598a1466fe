import json

import pytest

from cli import run


def _json(capsys, *argv):
    assert run(list(argv) + ["--json"]) == 0
    return json.loads(capsys.readouterr().out)


def test_triple(capsys):
    assert run(["triple", "--k", "2"]) == 0
    assert capsys.readouterr().out.strip() == "7,23,17"


def test_genus(capsys):
    assert _json(capsys, "genus", "--n", "17") == {
        "n": 17, "h2": 1, "h4": 1, "h8": 0, "d0": 2, "oracle_agrees": True,
    }


def test_sha(capsys):
    trace = _json(capsys, "sha", "--triple", "1,1,1", "--n", "17", "--theorem", "2")
    assert trace["sha_predicate"] is True
    assert (trace["h4"], trace["d"], trace["h8"]) == (1, 1, 0)


def test_selmer_with_oracle(capsys):
    payload = _json(capsys, "selmer", "--triple", "1,1,1", "--n", "17", "--oracle")
    assert payload["s2"] == 2 and payload["full_selmer_dim"] == 4
    assert payload["oracle_agrees"] is True
    payload = _json(capsys, "selmer", "--triple", "1,1,1", "--n", "17")
    assert payload["oracle_agrees"] == "skipped"


def test_cassels(capsys):
    payload = _json(capsys, "cassels", "--triple", "1,1,1", "--n", "17", "--theorem", "1")
    assert payload["pairing"] == -1 and payload["d"] == 17


def test_torsion(capsys):
    payload = _json(capsys, "torsion", "--triple", "1,1,1", "--n", "17")
    assert payload["torsion"] == "Z/2Z x Z/2Z"
    assert not payload["ono_order4"]


def test_count_matrices(capsys):
    payload = _json(capsys, "count-matrices", "--k", "3")
    assert [row["count"] for row in payload["counts"]] == [1, 7, 28, 28]
    assert payload["total"] == 64
    assert payload["rank_deficient"] == payload["rank_deficient_bruteforce"] == 3


def test_base_selmer(capsys):
    payload = _json(capsys, "base-selmer", "--triple", "7,23,17")
    assert payload["usable"] is True


def test_density_csv(capsys):
    assert run(["density", "--triple", "1,1,1", "--k", "1", "--x", "200", "--csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# t=1,1,1 x=200 k=1 theorem=2 seed=0"
    assert lines[1].startswith("n,k,admissible")
    assert len(lines) == 2 + 8


def test_ck_set(capsys):
    payload = _json(capsys, "ck-set", "--alpha", "1,1", "--matrix", "00;00", "--x", "5000")
    assert payload["count"] == len(payload["members"])


def test_contract_violation_exit_code(capsys):
    assert run(["sha", "--triple", "1,1,1", "--n", "5", "--theorem", "2"]) == 2
    assert "❌" in capsys.readouterr().err


def test_search_exhausted_exit_code(capsys, monkeypatch):
    from config import config

    monkeypatch.setattr(config, "SIEVE_MAX", 100)
    assert run(["density", "--triple", "1,1,1", "--k", "1", "--x", "200"]) == 1


def test_out_writes_results(capsys, monkeypatch, tmp_path):
    from config import config

    monkeypatch.setattr(config, "RESULTS_DIR", tmp_path)
    assert run(["genus", "--n", "17", "--json", "--out", "genus17.json"]) == 0
    assert json.loads((tmp_path / "genus17.json").read_text())["h4"] == 1


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        run(["frobnicate"])
