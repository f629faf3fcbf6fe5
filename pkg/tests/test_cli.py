from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from toric_sums.cli import dumps, main
from toric_sums.laurent import g_polynomial
from toric_sums.verify import load_expected


def document(n, *terms):
    return {"n": n, "terms": [{"coeff": c, "exp": list(e)} for c, e in terms]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out), out


@pytest.fixture
def spec_file(tmp_path):
    def write(doc, name="f.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return write


def test_polytope(capsys):
    code, doc, _ = run_json(capsys, "polytope")
    assert code == 0
    assert doc["normalized_volume"] == 9 and doc["denominator"] == 1
    assert doc["origin_face_counts"] == [1, 6, 15, 18, 9]


def test_hodge(capsys):
    code, doc, _ = run_json(capsys, "hodge")
    assert code == 0
    assert doc["W"] == [1, 7, 28, 82, 196, 406]
    assert doc["H"][:5] == [1, 2, 3, 2, 1]
    assert doc["hp_vertices"][-1] == [9, "18/1"]


def test_ordinary(capsys):
    code, doc, _ = run_json(capsys, "ordinary", "--prime", "3")
    assert code == 0 and doc["status"] == "ordinary"
    assert doc["slopes_after_unit_root_and_shift"] == [["0/1", 2], ["1/1", 3], ["2/1", 2], ["3/1", 1]]


def test_ordinary_unsupported(capsys, spec_file):
    path = spec_file(document(2, (1, (2, 0)), (1, (0, 2)), (1, (1, 1))))
    code, doc, _ = run_json(capsys, "ordinary", "--input", path, "--prime", "3")
    assert code == 0 and doc["status"] == "unsupported"


def test_conjecture_mismatch(capsys):
    code, out, _ = run(capsys, "conjecture", "--k", "5")
    assert code == 0
    assert "MISMATCH" in out
    _, doc, _ = run_json(capsys, "conjecture", "--k", "5")
    assert doc["weights"] == [{"conjectured": 7, "k": 5, "outcome": "MISMATCH", "reference": 6}]


def test_conjecture_full_table(capsys):
    _, doc, _ = run_json(capsys, "conjecture")
    assert [w["conjectured"] for w in doc["weights"]] == [1, 0, 1, 1, -1, 7]
    assert [w["outcome"] for w in doc["weights"]][:3] == ["MATCH"] * 3


def test_lfunction_trivial_factors(capsys):
    code, doc, _ = run_json(capsys, "lfunction", "--prime", "3", "--kmax", "9", "--fast")
    assert code == 0 and doc["status"] == "ok"
    assert doc["Lstar_trivial_factors"] == "(1-T)(1-3T)(1-9T)"
    assert doc["L_two_ways_agree"] is True
    assert doc["Lstar"]["degree"] == 9 and doc["L"]["degree"] == 8


def test_lfunction_over_budget_is_skipped(capsys):
    code, doc, _ = run_json(capsys, "lfunction", "--prime", "5", "--fast")
    assert code == 0
    assert doc["status"].startswith("skipped")
    assert doc["kmax"] < 9


def test_lfunction_generic(capsys, spec_file):
    path = spec_file(document(1, (1, (1,)), (1, (-1,))))
    code, doc, _ = run_json(capsys, "lfunction", "--input", path, "--prime", "5")
    assert code == 0 and doc["status"] == "ok"
    assert doc["polynomial"] == "L*" and doc["L"]["degree"] == 2
    assert doc["overdetermination_check"] == "passed"


def test_json_is_byte_stable(capsys):
    for argv in (["polytope"], ["hodge"], ["conjecture"], ["ordinary", "--prime", "2"]):
        _, doc, raw = run_json(capsys, *argv)
        assert dumps(doc) + "\n" == raw
        _, _, again = run_json(capsys, *argv)
        assert again == raw


def test_flags_on_either_side(capsys):
    a = run(capsys, "--json", "hodge")[1]
    b = run(capsys, "hodge", "--json")[1]
    assert a == b


def test_verify_paper_passes(capsys):
    code, out, _ = run(capsys, "verify-paper", "--kmax", "3")
    assert code == 0, out


def test_verify_paper_tampered(capsys, tmp_path):
    exp = load_expected()
    exp["W"] = [1, 7, 28, 82, 196, 407]
    path = tmp_path / "tampered.record"
    path.write_text(json.dumps(exp))
    code, _, _ = run(capsys, "verify-paper", "--kmax", "3", "--expected", str(path))
    assert code == 1


def test_stdin_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(g_polynomial().to_document())))
    code, doc, _ = run_json(capsys, "polytope", "--input", "-")
    assert code == 0 and doc["normalized_volume"] == 9


@pytest.mark.parametrize(
    "argv",
    [
        ["ordinary"],
        ["ordinary", "--prime", "4"],
        ["polytope", "--input", "/nonexistent/file.json"],
        ["lfunction", "--prime", "3", "--coeffs", "1,2,3"],
        ["lfunction", "--prime", "3", "--kmax", "-1"],
        ["bogus"],
        [],
    ],
)
def test_input_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize(
    "bad",
    [
        "{not json",
        {"n": 2, "terms": [[1, [1, 0]]]},
        document(2, (1, (1, 0)), (1, (1, 0))),
        document(2, (1, (1, 0, 0))),
        document(2, (1, (1, 1)), (1, (2, 2))),
        document(1, ("x", (1,))),
    ],
)
def test_bad_documents_exit_two(capsys, spec_file, bad):
    code, _, err = run(capsys, "polytope", "--input", spec_file(bad))
    assert code == 2 and err.startswith("error:")


def test_console_script():
    exe = shutil.which("toric-sums")
    if exe is None:
        pytest.skip("console script not installed")
    res = subprocess.run([exe, "hodge", "--json"], capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["degree"] == 9
