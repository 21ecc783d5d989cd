import io
import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from qdeform.cli import EXIT_COMPUTE, EXIT_OK, EXIT_THEOREM, EXIT_USAGE, run

SCHEMA = json.loads((pathlib.Path(__file__).parents[1] / "schema" / "cli-output.schema.json").read_text())


def call(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv, **kw):
    code, out, err = call("--json", *argv, **kw)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_qrat_text():
    code, out, _ = call("qrat", "5/2")
    assert code == EXIT_OK
    assert out.strip() == "(1 + 2*q + q^2 + q^3)/(1 + q)"


def test_qrat_json():
    code, doc = call_json("qrat", "--", "-5/3")
    assert code == EXIT_OK and doc["verb"] == "qrat" and doc["ok"]
    r = doc["result"]
    assert (r["sign"], r["N"]) == (-1, 2)
    assert r["S"]["text"] == "1 + q + q^2"


def test_per_verb_json_flag():
    code, out, _ = call("qrat", "1/2", "--json")
    assert json.loads(out)["result"]["value"] == "1/2"


@pytest.mark.parametrize("flavor, text", [("reg", "[2,2,2]"), ("neg", "[[3,2,3]]")])
def test_cf(flavor, text):
    code, out, _ = call("cf", "12/5", "--flavor", flavor)
    assert code == EXIT_OK
    assert out.strip() in (text, text.replace("[2,2,2]", "[2,2,1,1]"))


def test_qcf_matches_qrat():
    _, a = call_json("qcf", "[[3,2,3]]")
    _, b = call_json("qrat", "12/5")
    assert a["result"]["value"] == "12/5"
    assert a["result"]["num"]["text"] == b["result"]["R"]["text"]


def test_qcf_ill_defined():
    code, _, err = call("qcf", "[1,0]")
    assert code == EXIT_COMPUTE and "error" in err


@pytest.mark.parametrize("word", ["M[2,2,1,1]", "M+[1,2]", "R^2 S R"])
def test_mat(word):
    code, doc = call_json("mat", word)
    assert code == EXIT_OK
    (a, b), (c, d) = doc["result"]["at_one"]
    assert a * d - b * c == 1


def test_trace():
    code, doc = call_json("trace", "M[3,3]")
    r = doc["result"]
    assert r["trace"]["text"] == "1 + 2*q + q^2 + 2*q^3 + q^4"
    assert r["palindrome"] and r["nonneg"] and not r["unimodal"]


def test_quad():
    code, out, _ = call("quad", "(1+sqrt(5))/2")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "[[2,(3)*]]"
    _, doc = call_json("quad", "1+sqrt(2)")
    assert doc["result"]["S"]["text"] == "2*q"


def test_series_rational_and_surd():
    _, doc = call_json("series", "12/5", "--order", "6")
    assert doc["result"]["coeffs"] == [1, 1, 0, 0, 1, 0, -2]
    _, doc = call_json("series", "(1+sqrt(5))/2", "--order", "6")
    assert doc["result"]["coeffs"] == [1, 0, 1, -1, 2, -4, 8]


def test_series_from_stdin(monkeypatch):
    code, doc = call_json("series", "-", "--order", "8", stdin="1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1\n" * 3,
                          monkeypatch=monkeypatch)
    assert code == EXIT_OK
    assert doc["result"]["coeffs"][:5] == [1, 0, 1, -1, 2]


def test_scan_text_and_json():
    code, out, _ = call("scan", "--k", "1:3", "--range", "2:3")
    assert code == EXIT_OK and "words checked: 14" in out
    code, doc = call_json("scan", "--k", "1:3", "--range=-1:2", "--hypothesis", "all", "--checks", "palindrome,positive")
    assert code == EXIT_OK
    assert doc["result"]["counts"]["words"] == 4 + 16 + 64


def test_scan_cap_is_a_compute_error():
    code, _, err = call("scan", "--k", "1:9", "--range", "2:9", "--cap", "100")
    assert code == EXIT_COMPUTE and "cap" in err


def test_scan_theorem_violation(monkeypatch):
    import qdeform.lab as lab

    monkeypatch.setattr(lab, "check_word", lambda c, *a, **k: [lab.Violation(tuple(c), "reversal", "q", True)])
    code, doc = call_json("scan", "--k", "1:1", "--range", "2:2")
    assert code == EXIT_THEOREM and not doc["ok"]


def test_cohn():
    _, doc = call_json("cohn", "AAB")
    (a, b), (c, d) = doc["result"]["at_one"]
    # Markov triple (1, 5, 13): the trace of AAB at q = 1 is 3 * 13
    assert a + d == 39 and a * d - b * c == 1


def test_divcheck():
    code, doc = call_json("divcheck", "--target", "cohn:AB", "--target", "quad:(1+sqrt(5))/2", "--by", "1+q+q^2",
                          "--by", "1-q+q^2")
    rows = {(r["target"], r["candidate"]): r for r in doc["result"]["rows"]}
    assert rows[("cohn:AB", "1+q+q^2")]["positive"]
    assert rows[("quad:(1+sqrt(5))/2", "1-q+q^2")]["quotient_text"] == "1 + 3*q + q^2"


def test_repro_list_and_table():
    code, out, _ = call("repro", "list")
    assert code == EXIT_OK and "cohn" in out.split()
    code, doc = call_json("repro", "qrationals")
    assert code == EXIT_OK and doc["ok"]
    assert all(row["ok"] for row in doc["result"]["tables"]["qrationals"])


def test_repro_mismatch_exit(monkeypatch):
    import qdeform.repro as repro

    monkeypatch.setitem(repro.TABLES, "qrationals", lambda: [repro.Check("x", "1", "2", False, None)])
    code, out, _ = call("repro", "qrationals")
    assert code == EXIT_COMPUTE and "MISMATCH" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["qrat", "1/0"],
        ["qrat", "abc"],
        ["quad", "sqrt(9)"],
        ["mat", "M[1,x]"],
        ["repro", "nosuch"],
        ["scan", "--k", "0:2"],
        ["series", "3", "--order", "-1"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv):
    code, _, _ = call(*argv)
    assert code == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdeform", "--json", "qrat", "3/5"], capture_output=True, text=True)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    jsonschema.validate(doc, SCHEMA)
    assert doc["result"]["N"] == -1
