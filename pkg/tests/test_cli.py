import io
import json

import pytest

from icubes.cli import run
from icubes.icube import verify
from icubes.ring import Ring
from icubes.textio import load_matrix


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_extend_prints_icube():
    code, out, _ = call("extend", "--ring", "Z", "--dim", "3", "1,2,2")
    assert code == 0
    rows = out.strip().splitlines()[:3]
    A = load_matrix(";".join(",".join(r.split()) for r in rows), Ring.Z)
    assert verify(A).lam == 9


def test_extend_json_round_trip():
    code, out, _ = call("extend", "--ring", "Zi", "--dim", "4", "--format", "json", "1+2i,i,0,3")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["icube"]["lambda"] == "15"
    A = load_matrix(json.dumps(doc["icube"]), Ring.ZI)
    assert verify(A, Ring.ZI).lam == 15


def test_output_is_reproducible():
    assert call("extend", "--format", "json", "2,3,6") == call("extend", "--format", "json", "2,3,6")


def test_obstruct():
    code, out, _ = call("obstruct", "--ring", "Zi", "1,1,1,1,1")
    assert code == 0 and out.strip() == "Obstructed: 1+i-indivisible"
    code, out, _ = call("obstruct", "--oracle", "1,1,0")
    assert code == 0 and out.startswith("Obstructed: odd-n-nonsquare")


def test_verify_paper_examples():
    code, out, _ = call("verify-paper-examples")
    assert code == 0 and "FAIL" not in out


def test_verify_reports_pair():
    code, out, _ = call("verify", "--format", "json", "1,1;0,0")
    assert code == 1 and json.loads(out)["pair"] == [0, 1]


def test_small_commands():
    assert call("two-squares", "425")[1].strip() == "425 = 19^2 + 8^2"
    assert call("two-squares", "21")[0] == 1
    code, out, _ = call("factor-quat", "1+2i+3j+4k", "--norm", "5")
    assert code == 0 and out.startswith("u = ")
    code, out, _ = call("snf", "3,0;0,5")
    assert code == 0 and out.startswith("diag: 1, 15")
    code, out, _ = call("orthoreg", "--ring", "Zi", "--form", "1,0;0,1", "--lam", "5")
    assert code == 0
    code, out, _ = call("hecke-count", "--n", "2", "5", "13")
    assert code == 0 and "192" in out
    code, out, _ = call("sweep-c8", "--norm-bound", "4", "--samples", "0")
    assert code == 0


@pytest.mark.parametrize("argv,code", [
    (("extend", "--bogus"), 2),
    (("nonsense",), 2),
    (("extend", "1,x,2"), 2),
    (("extend", "--dim", "3", "1,1,1"), 1),
    (("hecke-count", "--n", "2", "4", "9"), 1),
])
def test_exit_codes(argv, code):
    got, out, _ = call(*argv)
    assert got == code


def test_json_mode_has_no_partial_output_on_error():
    code, out, err = call("extend", "--format", "json", "1,1,1")
    assert code == 1 and out == "" and err


def test_input_file(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps([["1"], ["2"], ["2"]]))
    code, out, _ = call("extend", "--input", str(p))
    assert code == 0


def test_input_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("1;2;2\n"))
    code, out, _ = call("extend", "--input", "-")
    assert code == 0 and "lambda = 9" in out


def test_missing_input_file_is_usage_error():
    assert call("extend", "--input", "/no/such/file")[0] == 2
