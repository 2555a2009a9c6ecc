import json

import pytest

from loccdisc import families as fam
from loccdisc import jsonio
from loccdisc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_then_check(tmp_path, capsys):
    f = tmp_path / "s.json"
    assert run(capsys, "build-set", "--family", "bipartite", "--dims", "4,5", "--out", str(f))[0] == 0
    assert jsonio.set_from_json(json.loads(f.read_text())) == fam.bipartite_set(4, 5)
    code, out, _ = run(capsys, "check-set", "--in", str(f))
    doc = json.loads(out)
    assert code == 0 and doc["gram_ok"] and doc["product_ok"] and doc["count_ok"]
    assert [w["trivial_only"] for w in doc["witness"]] == [True, True]


def test_check_set_count_failure_exit_code(capsys):
    code, out, _ = run(capsys, "check-set", "--family", "odd", "--dims", "4,5,6,4,5", "--no-witness")
    assert code == 2 and json.loads(out)["count_audit"]["actual"] == 25


def test_protocol_pipeline(tmp_path, capsys):
    f = tmp_path / "p.json"
    assert run(capsys, "build-protocol", "--theorem", "example456", "--out", str(f))[0] == 0
    code, out, _ = run(capsys, "verify-protocol", "--in", str(f), "--post-selected")
    assert code == 0 and json.loads(out)["perfect"] is True
    assert run(capsys, "verify-protocol", "--in", str(f))[0] == 2
    code, out, _ = run(capsys, "run-protocol", "--in", str(f), "--state", "phi10")
    (r,) = json.loads(out)["runs"]
    assert {v["declare"] for v in r["leaves"].values()} == {"phi10", "FAIL"}


def test_run_protocol_with_explicit_set(tmp_path, capsys):
    p, s = tmp_path / "p.json", tmp_path / "s.json"
    run(capsys, "build-protocol", "--theorem", "1", "--dims", "4,5", "--out", str(p))
    run(capsys, "build-set", "--family", "bipartite", "--dims", "4,5", "--out", str(s))
    code, out, _ = run(capsys, "run-protocol", "--in", str(p), "--set", str(s), "--state", "phi5")
    assert code == 0
    assert json.loads(out)["runs"][0]["leaves"]["B1/A4"] == {"probability": "1/5", "declare": "phi5"}


def test_render_tiles_default_family(capsys):
    code, out, _ = run(capsys, "render-tiles", "--dims", "4,5", "--format", "text")
    assert code == 0 and "rows A, columns B" in out


def test_witness_command(capsys):
    code, out, _ = run(capsys, "witness", "--family", "bipartite", "--dims", "4,5", "--party", "Bob")
    assert code == 0 and json.loads(out)["witness"][0]["trivial_only"]


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--min", "4", "--max", "5", "--post-selected")
    doc = json.loads(out)
    assert code == 0 and [r["dims"] for r in doc["rows"]] == [[4, 4], [4, 5], [5, 5]]


@pytest.mark.parametrize("argv", [
    ("build-set", "--family", "nope"),
    ("build-protocol", "--theorem", "1", "--dims", "4"),
    ("build-set", "--family", "bipartite", "--dims", "4,x"),
    ("verify-protocol", "--in", "/nonexistent.json"),
    (),
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_schema_error_message(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"schema": 1, "set": {"family": "bipartite", "params": [4, 5]}, "layout": [], '
                 '"resources": [{"parties": ["Alice"]}], "root": {"declare": "FAIL"}}')
    code, _, err = run(capsys, "verify-protocol", "--in", str(f))
    assert code == 1 and "$.resources[0].registers" in err


@pytest.mark.parametrize("argv", [
    ("build-set", "--family", "even", "--dims", "4,5,4,5"),
    ("check-set", "--family", "tripartite_example"),
    ("build-protocol", "--theorem", "4", "--dims", "4,5,6,4,5"),
    ("render-tiles", "--family", "tripartite_example"),
    ("sweep", "--theorem", "3", "--max", "5", "--post-selected"),
])
def test_outputs_are_byte_identical(capsys, argv):
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
