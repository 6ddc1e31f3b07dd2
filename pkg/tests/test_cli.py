import json
import os
import subprocess
import sys

import pytest

from bsfamily import cli
from bsfamily.errors import DecompositionUnsupported, IrrationalRoots, NotGenericallyRational

DEFORMED_CUSP = ["--f", "x1^2+y*x2^2+x2^3", "--x", "x1,x2", "--y", "y"]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def roots(doc):
    return [(r["root"], r["multiplicity"]) for r in doc["b"]["roots"]]


def test_bfunction_example(capsys):
    code, out, _ = run(["bfunction", "--f", "x^2", "--x", "x"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert roots(doc) == [("-1", 1), ("-1/2", 1)]
    assert doc["b"]["factored"] == "(s+1)*(s+1/2)"


def test_generic_on_the_special_fibre(capsys):
    code, out, _ = run(["generic"] + DEFORMED_CUSP + ["--Q", "y"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert sorted(roots(doc)) == sorted([("-1", 1), ("-5/6", 1), ("-7/6", 1)])


def test_generic_reports_h_prime_by_stage(capsys):
    code, out, _ = run(["generic"] + DEFORMED_CUSP + ["--order", "global", "--samples", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and roots(doc) == [("-1", 2)]
    assert doc["h_prime"]["factors"] == [{"factor": "y", "multiplicity": 1}]
    assert all({"stage", "value", "factors"} <= set(st) for st in doc["h_prime"]["stages"])
    assert doc["specialization"]["all_equal"] and len(doc["specialization"]["points"]) == 2


def test_stratify_document(capsys):
    code, out, _ = run(["stratify"] + DEFORMED_CUSP + ["--order", "global"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["disjoint"]
    descr = {st["factored"]: [c["description"] for c in st["carrier"]] for st in doc["strata"]}
    assert descr["(s+1)^2"] == ["V(0) minus V(y)"]
    assert descr["(s+7/6)*(s+1)*(s+5/6)"] == ["V(y)"]


def test_stratify_where_f_vanishes(capsys):
    code, out, _ = run(["stratify", "--f", "y*x", "--x", "x", "--y", "y"], capsys)
    doc = json.loads(out)
    assert code == 0
    dead = [st for st in doc["strata"] if st["roots"] is None]
    assert [c["Q"] for c in dead[0]["carrier"]] == [["y"]]


def test_verify_round_trip(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, out, _ = run(["generic"] + DEFORMED_CUSP + ["--Q", "y", "--certificate", str(cert)], capsys)
    assert code == 0 and json.loads(out)["certificate_verified"]
    code, out, _ = run(["verify", "--certificate", str(cert)], capsys)
    assert code == 0 and json.loads(out)["ok"]

    doc = json.loads(cert.read_text())
    doc["h"] = "2*" + doc["h"] if doc["h"] != "0" else "1"
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(["verify", "--certificate", str(bad)], capsys)
    res = json.loads(out)
    assert code == 1 and not res["ok"] and res["residual"]


def test_embedded_certificate(capsys):
    code, out, _ = run(["bfunction", "--f", "x^2", "--x", "x", "--certificate", "-"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["certificate_verified"]
    assert doc["certificate"]["P0"] == [{"x": [0], "z": {"dx": 2}, "c": "1/4"}]


@pytest.mark.parametrize("text", ["not json", "[1, 2]", '{"x": ["x"]}',
                                  '{"x": ["x"], "f": "x", "b": [], "h": "1", "P0": 3, "P1": []}'])
def test_garbage_certificates(tmp_path, capsys, text):
    p = tmp_path / "c.json"
    p.write_text(text)
    code, _, err = run(["verify", "--certificate", str(p)], capsys)
    assert code == 7 and "MalformedCertificate" in err


@pytest.mark.parametrize("argv", [
    ["bfunction", "--f", "x^", "--x", "x"],
    ["bfunction", "--f", "2x", "--x", "x"],
    ["bfunction", "--f", "x*z", "--x", "x"],
    ["generic", "--f", "x*y", "--x", "x", "--y", "x"],
    ["bfunction", "--f", "0", "--x", "x"],
    ["frobnicate"],
    ["stratify", "--f", "x", "--x", "x", "--y", "y", "--Q", "y"],
])
def test_parse_errors(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


@pytest.mark.parametrize("exc,code", [(NotGenericallyRational, 3), (IrrationalRoots, 4),
                                      (DecompositionUnsupported, 5)])
def test_error_classes_map_to_exit_codes(monkeypatch, capsys, exc, code):
    def boom(*a, **k):
        raise exc("synthetic")

    monkeypatch.setattr(cli, "generic_bernstein", boom)
    got, _, err = run(["generic", "--f", "x*y", "--x", "x", "--y", "y"], capsys)
    assert got == code and exc.__name__ in err


def test_decomposition_unsupported_for_real(capsys):
    argv = ["stratify", "--f", "(y1^2+y2^2-1)*x+y1*x^2", "--x", "x", "--y", "y1,y2"]
    assert run(argv, capsys)[0] == 5


def test_step_budget_from_the_environment(monkeypatch, capsys):
    monkeypatch.setenv("BSFAMILY_STEP_BUDGET", "1")
    code, _, err = run(["bfunction", "--f", "x^2+y^3", "--x", "x,y"], capsys)
    assert code == 6 and "ResourceError" in err
    monkeypatch.setenv("BSFAMILY_STEP_BUDGET", "lots")
    assert run(["bfunction", "--f", "x", "--x", "x"], capsys)[0] == 2


def test_bad_order_is_rejected(capsys):
    assert run(["bfunction", "--f", "x", "--x", "x", "--order", "sideways"], capsys)[0] == 2


def test_text_format(capsys):
    code, out, _ = run(["bfunction", "--f", "x^2+y^3", "--x", "x,y", "--format", "text"], capsys)
    assert code == 0 and out.strip() == "b(s) = (s+7/6)*(s+1)*(s+5/6)"
    code, out, _ = run(["stratify"] + DEFORMED_CUSP + ["--format", "text", "--order", "global"], capsys)
    assert out.splitlines() == ["V(0) minus V(y): b(s) = (s+1)^2",
                                "V(y): b(s) = (s+7/6)*(s+1)*(s+5/6)"]


def test_output_is_byte_stable():
    argv = [sys.executable, "-m", "bsfamily.cli", "generic"] + DEFORMED_CUSP + ["--order", "global", "--samples", "2"]
    outs = set()
    for seed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        outs.add(subprocess.run(argv, capture_output=True, env=env, check=True).stdout)
    assert len(outs) == 1
