import json
import os
import subprocess
import sys

import pytest

from hpk.cli import FAILED, INTERNAL, OK, USAGE, main
from hpk.io import EXAMPLES, dumps, example_document, structure_from_json, structure_to_json
from hpk.liepair import LiePair, matched_pair_from_json, matched_pair_to_json


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def sl2(tmp_path):
    return write(tmp_path / "sl2.json", example_document("sl2-cartan"))


def run_cli(args, env=None):
    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "hpk.cli", *args], capture_output=True,
                          text=True, env=e)


def test_liepair_check_passes(sl2, capsys):
    assert main(["liepair", "check", sl2, "--arity-cap", "4", "--word-cap", "3"]) == OK
    rep = json.loads(capsys.readouterr().out)
    assert [c["check"] for c in rep["checks"]] == ["subalgebra-closed", "leibniz", "jacobi",
                                                   "higher-brackets-vanish"]
    assert all(c["pass"] for c in rep["checks"])


def test_non_closed_subalgebra_fails_with_witness(tmp_path, capsys):
    doc = example_document("sl2-cartan")
    doc["subalgebra"] = ["e", "f"]
    path = write(tmp_path / "bad.json", doc)
    assert main(["liepair-check", path]) == FAILED
    rep = json.loads(capsys.readouterr().out)
    c = rep["checks"][0]
    assert c["check"] == "subalgebra-closed" and not c["pass"]
    assert c["failures"][0]["triple"][:2] == ["e", "f"]


def test_usage_errors(tmp_path, sl2, capsys):
    assert main([]) == USAGE
    assert main(["no-such-command"]) == USAGE
    assert main(["liepair-check", str(tmp_path / "missing.json")]) == USAGE
    (tmp_path / "broken.json").write_text("{ not json")
    assert main(["check-linf", str(tmp_path / "broken.json")]) == USAGE
    err = capsys.readouterr().err
    assert "line 1" in err
    assert main(["liepair-check", sl2, "--arity-cap", "0"]) == USAGE


def test_structural_error_exit(tmp_path, sl2):
    # a connection with torsion is rejected before any comparison runs
    conn = write(tmp_path / "conn.json", {"deltaB": [{"x": "e", "y": "f", "value": [["e", "1"]]}]})
    assert main(["fedosov", "compare", sl2, "--deltaB", conn, "--weight", "2",
                 "--arity-cap", "3"]) == INTERNAL


def test_failed_check_exit(tmp_path, capsys):
    doc = {"kind": "linf", "k": 0,
           "space": {"elements": [{"name": "h", "degree": 0}, {"name": "e", "degree": 0},
                                  {"name": "f", "degree": 0}]},
           "brackets": [{"arity": 2, "word": ["h", "e"], "value": [["e", "2"]]},
                        {"arity": 2, "word": ["h", "f"], "value": [["f", "-2"]]},
                        {"arity": 2, "word": ["e", "f"], "value": [["e", "1"]]}]}
    path = write(tmp_path / "bad.json", doc)
    assert main(["check-linf", path]) == FAILED
    rep = json.loads(capsys.readouterr().out)
    assert rep["checks"][0]["failure_count"] > 0
    assert main(["polyvec", "mc-check", path, "--k", "1"]) == FAILED


def test_polyvec_extend_output_is_a_fixpoint(sl2, tmp_path, capsys):
    data = tmp_path / "lin.json"
    doc = {"kind": "linf", "k": 0,
           "space": {"elements": [{"name": "h", "degree": 0}, {"name": "e", "degree": 0},
                                  {"name": "f", "degree": 0}]},
           "brackets": [{"arity": 2, "word": ["h", "e"], "value": [["e", "2"]]},
                        {"arity": 2, "word": ["h", "f"], "value": [["f", "-2"]]},
                        {"arity": 2, "word": ["e", "f"], "value": [["h", "1"]]}]}
    write(data, doc)
    assert main(["polyvec", "extend", str(data), "--k", "1"]) == OK
    out = json.loads(capsys.readouterr().out)["structure"]
    again = structure_to_json(structure_from_json(out))
    assert json.loads(dumps(again)) == out


@pytest.mark.parametrize("name", EXAMPLES)
def test_examples_roundtrip(name, tmp_path, capsys):
    assert main(["emit-example", name]) == OK
    doc = json.loads(capsys.readouterr().out)
    if name == "sl2-matched":
        again = matched_pair_to_json(*matched_pair_from_json(doc))
    else:
        again = LiePair.from_json(doc).to_json()
    assert json.loads(dumps(again)) == doc


def test_text_format(sl2, capsys):
    assert main(["liepair-check", sl2, "--format", "text", "--word-cap", "3"]) == OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "PASS subalgebra-closed"
    assert all(line.startswith("PASS ") for line in lines)


def test_config_file_and_flag_override(sl2, tmp_path, capsys):
    cfg = write(tmp_path / "cfg.json", {"format": "text", "word-cap": 3})
    assert main(["--config", cfg, "liepair-check", sl2]) == OK
    assert capsys.readouterr().out.startswith("PASS")
    assert main(["--config", cfg, "liepair-check", sl2, "--format", "json"]) == OK
    json.loads(capsys.readouterr().out)
    bad = write(tmp_path / "bad.json", {"colour": "red"})
    assert main(["--config", bad, "liepair-check", sl2]) == USAGE


def test_output_file(sl2, tmp_path):
    out = tmp_path / "rep.json"
    assert main(["liepair-check", sl2, "-o", str(out), "--word-cap", "3"]) == OK
    assert json.loads(out.read_text())["command"] == "liepair-check"


def test_output_is_deterministic_across_runs_and_threads(sl2):
    args = ["liepair-check", sl2, "--word-cap", "3"]
    outs = {run_cli(args, {"HPK_THREADS": t}).stdout for t in ("1", "4")}
    outs.add(run_cli(args + ["--threads", "3"]).stdout)
    assert len(outs) == 1
    assert run_cli(args).returncode == OK


def test_cohomology_and_splittings(sl2, tmp_path, capsys):
    assert main(["liepair", "cohomology", sl2]) == OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["dimensions"] == {"-2": 1, "-1": 1, "0": 1, "1": 1}
    phi = write(tmp_path / "phi.json", {"dphi": {"e": [["h", "1"]]}})
    assert main(["liepair", "compare-splittings", sl2, phi, "--arity-cap", "3",
                 "--word-cap", "3"]) == OK


def test_matched_pair_command(tmp_path, capsys):
    path = write(tmp_path / "mp.json", example_document("sl2-matched"))
    assert main(["matched-pair", path, "--word-cap", "3"]) == OK
    rep = json.loads(capsys.readouterr().out)
    assert [c["check"] for c in rep["checks"]] == ["matched-pair-identities", "ternary-vanishes",
                                                   "strict-jacobi", "derivation-differential"]


def test_transfer_command(tmp_path, capsys):
    sp = {"elements": [{"name": "u", "degree": -1}, {"name": "v", "degree": 0},
                       {"name": "w", "degree": 1}]}
    small = {"elements": [{"name": "w", "degree": 1}]}
    con = {"big": sp, "small": small, "d_big": [["u", [["v", "1"]]]], "d_small": [],
           "sigma": [["w", [["w", "1"]]]], "tau": [["w", [["w", "1"]]]], "h": [["v", [["u", "-1"]]]]}
    st = {"kind": "linf", "k": 0, "space": sp,
          "brackets": [{"arity": 1, "word": ["u"], "value": [["v", "1"]]}]}
    c = write(tmp_path / "c.json", con)
    s = write(tmp_path / "s.json", st)
    assert main(["transfer", "--contraction", c, "--structure", s]) == OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["structure"]["brackets"] == []


DATA = os.path.join(os.path.dirname(__file__), "..", "demos", "data")


def test_shipped_pair_passes():
    assert main(["liepair-check", os.path.join(DATA, "sl2-pair.json"), "--word-cap", "3"]) == OK


def test_empty_structure_passes(tmp_path, capsys):
    assert main(["check-linf", write(tmp_path / "e.json", {})]) == OK
    rep = json.loads(capsys.readouterr().out)
    assert all(c["pass"] and "failures" not in c for c in rep["checks"])


def test_failure_text_names_word_and_defect(capsys):
    assert main(["check-linf", os.path.join(DATA, "non-lie.json"), "--format", "text"]) == FAILED
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "FAIL jacobi (1 failures)"
    assert json.loads(out[1]) == {"check": "jacobi", "arity": 3, "word": ["h", "e", "f"],
                                  "defect": [["e", "-2"]]}
