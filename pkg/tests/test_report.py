import json
import math

from quantum_cg.qfield import QRat
from quantum_cg.report import Report, jsonable, render_reports


def make():
    r = Report("demo", {"b": 0.5}, seed=3)
    r.add("a", {"z": 1 + 2j}, 1e-9, 1e-8, lhs=1 + 0j, rhs=1 + 1e-9j)
    r.add("b", {"n": 2}, 0.0, 0.5)
    return r


def test_pass_and_max():
    r = make()
    assert r.passed
    assert r.max_residual == 1e-9
    assert math.isclose(r.max_normalized, 0.1)
    r.override_tol(1e-12)
    assert not r.passed
    assert len(r.failures()) == 1


def test_jsonable():
    assert jsonable(1 - 2j) == {"re": 1.0, "im": -2.0}
    assert jsonable(QRat.monomial(2)) == "q^2"
    assert jsonable(float("nan")) == "nan"
    assert jsonable((1, [2.5])) == [1, [2.5]]


def test_render_formats():
    r = make()
    body = json.loads(render_reports([r], "json"))
    assert body["suite"] == "demo" and body["schema"] == "1"
    both = json.loads(render_reports([r, make()], "json"))
    assert both["pass"] and len(both["reports"]) == 2
    lines = render_reports([r], "csv").splitlines()
    assert len(lines) == 3
    assert lines[2].split(",")[4] == ""
    assert "PASS" in render_reports([r], "text")
