import json

import pytest

from superlsa import catalog, cli, graded_core as gc


def run(argv, capsys, fmt="json"):
    code = cli.main(argv + ["--format", fmt])
    out = capsys.readouterr()
    body = out.out if fmt == "text" else (json.loads(out.out) if out.out else None)
    return code, body, out.err


@pytest.mark.parametrize("key", ["B1", "B2tilde_m1", "B2alpha", "A1", "A01"])
def test_verify_catalog_exit_zero(key, capsys):
    code, rep, _ = run(["verify", key], capsys)
    assert code == 0
    assert all(c["verdict"] == c["expected"] for c in rep["checks"] if c["expected"] is not None)


def test_verify_b1_reports_non_unique_identity(capsys):
    code, rep, _ = run(["verify", "B1"], capsys)
    ri = next(c for c in rep["checks"] if c["name"] == "right_identity")
    assert code == 0 and ri["unique"] is False and ri["unique_even"] == "x1 + x4"
    assert ri["homogeneous_basis"] == ["y3"]


def test_verify_wn(capsys):
    code, rep, _ = run(["verify", "Wn", "--n", "3"], capsys)
    assert code == 0 and rep["results"]["dim"] == 24


def test_verify_as_printed_fails(capsys):
    code, rep, _ = run(["verify", "B2alpha", "--as-printed"], capsys)
    assert code == 1
    comp = next(c for c in rep["checks"] if c["name"] == "compatible")
    assert comp["verdict"] is False


def test_transcription_section(capsys):
    code, rep, _ = run(["catalog", "discrepancies", "B2alpha"], capsys)
    t = rep["results"]["transcription"]
    assert code == 0 and t["printed_compatible"] is False and len(t["patch"]["entries"]) == 2


def test_bad_inputs_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "parity": [0, 1], "constants": [[0, 0, 1, "1"]]}')
    assert run(["verify", "--file", str(bad)], capsys)[0] == 2
    assert run(["verify", "--file", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["verify", "Wn", "--n", "99"], capsys)[0] == 2
    assert run(["verify", "B2alpha", "--alpha", "x"], capsys)[0] == 2
    assert run(["catalog", "family", "B", "1", "0"], capsys)[0] == 2


def test_unknown_key_exit_two(capsys):
    code, _, err = run(["verify", "nope"], capsys, fmt="text")
    assert code == 2 and "error" in err


def test_export_then_verify(tmp_path, capsys):
    out = tmp_path / "b1.json"
    assert run(["export", "B1", "--out", str(out)], capsys)[0] == 0
    assert gc.load_algebra(out) == catalog.instantiate("B1")
    code, rep, _ = run(["verify", "--file", str(out), "--lie", "A01"], capsys)
    assert code == 0
    assert {c["name"] for c in rep["checks"]} >= {"left_symmetric", "compatible"}


def test_report_digest_is_deterministic(capsys):
    _, a, _ = run(["verify", "B2tilde_m1"], capsys)
    _, b, _ = run(["verify", "B2tilde_m1"], capsys)
    assert a["report_sha256"] == b["report_sha256"]
    _, c, _ = run(["verify", "B1"], capsys)
    assert c["report_sha256"] != a["report_sha256"]


def test_emit_writes_report(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, rep, _ = run(["verify", "B1", "--emit", str(path)], capsys)
    assert json.loads(path.read_text())["report_sha256"] == rep["report_sha256"]


def test_solve_emits_case_tree(tmp_path, capsys):
    path = tmp_path / "tree.json"
    code, rep, _ = run(["solve", "--even", "A1", "--emit", str(path)], capsys)
    tree = json.loads(path.read_text())
    assert code == 0 and tree["case_tree"]["children"]
    killed = {c["label"]: {k["pair"] for k in c.get("killed_by", [])} for c in rep["results"]["cases"]}
    assert "[L(x1), L(y2)]" in killed["b"] and "[L(x1), L(y2)]" in killed["d"]
    assert "[L(x1), L(y3)]" in killed["c"]


def test_solve_stuck_exit_three(capsys):
    code, rep, _ = run(["solve", "--even", "A2alpha", "--alpha", "-1"], capsys)
    assert code == 3
    assert any("B2tilde_m1" in s["catalog_matches"] for s in rep["results"]["stuck"])


def test_iso_certificate_roundtrip(tmp_path, capsys):
    path = tmp_path / "cert.json"
    code, rep, _ = run(["iso", "B2alpha", "B2tilde_m1", "--alphaA", "-1", "--letter", "q",
                        "--emit", str(path)], capsys)
    assert code == 0 and rep["results"]["replayed"] is True
    body = json.loads(path.read_text())
    assert body["kind"] == "ConstraintContradiction"
    assert any(b["final"] == "row 5 of P vanishes: q55 = q56 = q57 = q58 = 0" for b in body["branches"])


def test_iso_witness(capsys):
    code, rep, _ = run(["iso", "B2alpha", "B2alpha", "--alphaA", "1", "--alphaB", "-1"], capsys)
    assert code == 0 and rep["results"]["isomorphic"] is True and rep["results"]["replayed"] is True


def test_catalog_listing(capsys):
    code, rep, _ = run(["catalog", "families"], capsys)
    assert code == 0 and len(rep["results"]["families"]) == len(catalog.KAC_FAMILIES)
    code, rep, _ = run(["catalog", "family", "C(n)", "4"], capsys)
    assert rep["results"]["verdict"]["verdict"] == catalog.NO_LSSA


def test_text_format(capsys):
    code, text, _ = run(["verify", "B1"], capsys, fmt="text")
    assert code == 0 and "unique even right identity: x1 + x4" in text and text.rstrip().endswith("exit 0")
