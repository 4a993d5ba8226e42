import json
import os
import subprocess
import sys

import pytest

from argue import parse_formula
from argue.cli import main, run

KBS = os.path.join(os.path.dirname(__file__), os.pardir, "kb")
TUMOUR = os.path.join(KBS, "tumour.kb")
CANCER = os.path.join(KBS, "cancer.kb")
KB_E = os.path.join(KBS, "kb_e.kb")
SYMMETRIC = os.path.join(KBS, "contradiction.kb")
PROOF = os.path.join(KBS, "tumour_proof.json")


def ok(*argv):
    code, out, err = run(list(argv))
    assert code == 0, err
    return out


def test_arguments_text():
    assert ok("arguments", "--kb", TUMOUR, "--goal", "growthLtd(someX)") == [
        "(growthLtd(someX), {c1(someX), f1, t1(someX)}, +)"]
    # negations print in their normal form
    assert ok("arguments", "--kb", TUMOUR, "--goal", "~growthLtd(someX)") == [
        "(growthLtd(someX) -> #, {f1, t2(someX)}, ++)"]


def test_arguments_none_is_success():
    assert ok("arguments", "--kb", TUMOUR, "--goal", "cell(nobody)") == [
        "no arguments for cell(nobody)"]


def test_arguments_json_roundtrip():
    (text,) = ok("arguments", "--kb", TUMOUR, "--goal", "growthLtd(someX)", "--format", "json")
    data = json.loads(text)
    (a,) = data["arguments"]
    assert parse_formula(a["formula"]) == parse_formula("growthLtd(someX)")
    assert a["grounds"] == sorted(a["grounds"]) == ["c1(someX)", "f1", "t1(someX)"]
    assert a["sign"] == "+"
    assert json.loads(json.dumps(data)) == data


def test_aggregate():
    assert ok("aggregate", "--kb", TUMOUR, "--goal", "growthLtd(someX)") == ["1"]
    assert ok("aggregate", "--kb", TUMOUR, "--goal", "~growthLtd(someX)") == ["++"]
    assert ok("aggregate", "--kb", CANCER, "--goal", "cancer") == ["0.85"]
    assert ok("aggregate", "--kb", KB_E, "--goal", "p", "--selective") == ["0"]
    assert ok("aggregate", "--kb", KB_E, "--goal", "p") == ["1"]
    (text,) = ok("aggregate", "--kb", CANCER, "--goal", "cancer", "--format", "json")
    assert abs(json.loads(text)["confidence"] - 0.85) <= 1e-12


def test_defeat():
    out = ok("defeat", "--kb", KB_E)
    assert any(line.startswith("IN") and "(a -> #, {f2}, ++)" in line for line in out)
    assert any(line.startswith("OUT") and "(p, {f1, r1}, +)" in line for line in out)
    graph = json.loads(ok("defeat", "--kb", SYMMETRIC, "--format", "json")[0])
    pro = {n["formula"]: n["label"] for n in graph["nodes"] if n["side"] == "pro"}
    assert pro["a"] == pro["a -> #"] == "UNDEC"


def test_prove_then_check(tmp_path):
    (text,) = ok("prove", "--kb", TUMOUR, "--goal", "growthLtd(someX)", "--format", "json")
    path = tmp_path / "p.json"
    path.write_text(text)
    assert ok("check", "--proof", str(path), "--kb", TUMOUR) == [
        "(growthLtd(someX), {c1(someX), f1, t1(someX)}, +)"]
    assert ok("check", "--proof", PROOF, "--kb", TUMOUR) == [
        "(growthLtd(someX), {c1(someX), f1, t1(someX)}, +)"]


def test_check_criteria():
    code, out, _ = run(["check", "--criteria", "flattening", "--flattener", "bnd"])
    assert code == 0
    assert out[0].startswith("F1: pass") and out[1].startswith("F2: pass")
    code, out, _ = run(["check", "--criteria", "acr", "--kb", KB_E, "--no-closure"])
    assert code == 1
    assert out[0].startswith("C1[native]: fail")
    code, out, _ = run(["check", "--criteria", "acr", "--kb", KB_E])
    assert code == 0


@pytest.mark.parametrize("argv,code", [
    (["arguments", "--kb", TUMOUR, "--goal", "cell(X)"], 3),
    (["arguments", "--kb", TUMOUR, "--goal", "cell("], 2),
    (["arguments", "--kb", "/nonexistent.kb", "--goal", "a"], 2),
    (["arguments", "--kb", TUMOUR], 2),
    (["aggregate", "--kb", CANCER, "--goal", "cancer", "--flattener", "bnd"], 3),
    (["aggregate", "--kb", TUMOUR, "--goal", "a", "--depth", "0"], 2),
    (["defeat", "--kb", TUMOUR], 3),
    (["check", "--kb", TUMOUR], 2),
    (["frobnicate"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().err


def test_kb_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.kb"
    bad.write_text("dict bounded\nf1 : a & [+]\n")
    assert run(["arguments", "--kb", str(bad), "--goal", "a"])[0] == 2
    wrong = tmp_path / "wrong.kb"
    wrong.write_text("dict generic\nf1 : a [++]\n")
    assert run(["arguments", "--kb", str(wrong), "--goal", "a"])[0] == 3


def test_invalid_proof_exit_code(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"rule": "axiom", "conclusion": "cell(someX)", "label": "f1"}))
    code, _, err = run(["check", "--proof", str(path), "--kb", TUMOUR])
    assert code == 1 and "root" in err[0]
    path.write_text("{not json")
    assert run(["check", "--proof", str(path), "--kb", TUMOUR])[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "argue", "aggregate", "--kb", CANCER, "--goal", "cancer"],
                         capture_output=True, text=True, check=True)
    assert res.stdout == "0.85\n"
