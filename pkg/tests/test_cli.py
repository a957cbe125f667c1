import json
import pathlib

import pytest

from avgalg.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
MANIFEST = json.loads((ROOT / "corpus" / "manifest.json").read_text())


@pytest.fixture(autouse=True)
def run_from_repo_root(monkeypatch):
    monkeypatch.chdir(ROOT)


@pytest.mark.parametrize("case", MANIFEST["cases"], ids=lambda c: c["name"])
def test_corpus_matches_golden(case, capsys):
    code = main(case["argv"])
    out = capsys.readouterr().out
    golden = (ROOT / "corpus" / case["golden"]).read_text()
    assert out == golden
    assert code == case["exit"]


@pytest.mark.parametrize("case", MANIFEST["cases"], ids=lambda c: c["name"])
def test_corpus_json_variant_parses(case, capsys):
    # insert the flag before any "--" separator in the argv
    code = main([case["argv"][0], "--json"] + case["argv"][1:])
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert code == case["exit"]
    command = case["argv"][0]
    if command == "decide":
        assert set(doc) == {"hypothesis", "results"}
        for entry in doc["results"]:
            assert entry["verdict"] in ("holds", "fails")
            if entry["verdict"] == "fails":
                assert entry["witness"]
    elif command == "eval":
        assert set(doc) == {"mode", "input", "normal_form"}
    elif command == "verify":
        assert {"averaging", "unitary", "reynolds"} <= set(doc)
    elif command == "lie-induce":
        assert doc["outcome"] in ("induced", "not_endo_induced",
                                  "no_solution", "diagnostic")
        if doc["outcome"] == "induced":
            assert "t" in doc and "operator" in doc
    elif command == "lie-analyze":
        assert {"averaging", "bracket", "nilpotency",
                "kernel_equals_brackets"} <= set(doc)
    elif command == "chain":
        assert len(doc["stages"]) == doc["n"]
    elif command == "primary":
        assert set(doc) == {"algebra", "operator"}


def test_parse_error_exits_two(capsys):
    code = main(["decide", "--hypothesis", "averaging", "--claim", "f(v1"])
    err = capsys.readouterr().err
    assert code == 2
    assert "error:" in err


def test_eval_reports_syntax_position(capsys):
    code = main(["eval", "--mode", "plain", "v1 @ v2"])
    err = capsys.readouterr().err
    assert code == 2
    assert "byte 3" in err


def test_missing_file_exits_two(capsys):
    code = main(["verify", "corpus/does_not_exist.json", "corpus/im.json"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_malformed_algebra_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"scalar": "Q", "dim": 2, "unit": ["1"], "mul": []}')
    code = main(["verify", str(bad), "corpus/im.json"])
    assert code == 2


def test_unverified_algebra_exits_two(tmp_path, capsys):
    doc = {"scalar": "Q", "dim": 2, "unit": ["0", "1"],
           "mul": [[["1", "0"], ["0", "1"]], [["0", "1"], ["-1", "0"]]]}
    bad = tmp_path / "nonunital.json"
    bad.write_text(json.dumps(doc))
    code = main(["verify", str(bad), "corpus/im.json"])
    err = capsys.readouterr().err
    assert code == 2
    assert "unit" in err


def test_bad_subcommand_usage_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["decide", "--hypothesis", "bogus", "--claim", "f(v1) = f(v1)"])
    assert exc.value.code == 2


def test_decide_requires_claims(capsys):
    code = main(["decide", "--hypothesis", "averaging"])
    assert code == 2
    assert "no claims" in capsys.readouterr().err


def test_scalar_default_env(monkeypatch, capsys):
    monkeypatch.setenv("AVG_SCALAR_DEFAULT", "Zmod:5")
    code = main(["eval", "--mode", "plain", "5*f(v1)"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.strip() == "0"


def test_bad_scalar_default_env(monkeypatch, capsys):
    monkeypatch.setenv("AVG_SCALAR_DEFAULT", "Zmod:notanumber")
    code = main(["eval", "--mode", "plain", "f(v1)"])
    assert code == 2


def test_chain_json_matches_library(capsys):
    main(["chain", "2", "3", "--json"])
    doc = json.loads(capsys.readouterr().out)
    from avgalg.freeavg import chain_witness
    stages = chain_witness(2, 3)
    assert doc["stages"] == [[g.render() for g in st] for st in stages]
