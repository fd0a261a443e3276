"""Verification reports and their JSON / CSV / text serialisations."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

SCHEMA = "1"

CSV_COLUMNS = ("suite", "case", "check", "inputs", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
               "residual", "tol", "pass")


def jsonable(v):
    """Convert complex numbers, numpy scalars, tuples and q-rationals to JSON types."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, complex):
        return {"re": _num(v.real), "im": _num(v.imag)}
    if isinstance(v, float):
        return _num(v)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "item") and not hasattr(v, "laurent_coeffs"):
        return jsonable(v.item())
    return str(v)


def _num(x: float):
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return float(x)


@dataclass
class Case:
    check: str
    inputs: dict
    residual: float
    tol: float
    lhs: object = None
    rhs: object = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def to_json(self, index: int, aliases: bool = False) -> dict:
        d = {"case": index, "check": self.check, "inputs": jsonable(self.inputs),
             "lhs": jsonable(self.lhs), "rhs": jsonable(self.rhs),
             "residual": _num(float(self.residual)), "tol": self.tol, "pass": self.passed}
        if aliases:
            # integral identity reports also use the params / rel_residual names
            d["params"] = d["inputs"]
            d["rel_residual"] = d["residual"]
        if self.extra:
            d["extra"] = jsonable(self.extra)
        return d


@dataclass
class Report:
    """A named suite of residual checks.

    Each case carries its own tolerance; the report passes exactly when
    max(residual / tol) <= 1.
    """

    suite: str
    params: dict = field(default_factory=dict)
    cases: list = field(default_factory=list)
    seed: int | None = None
    wall_time: float | None = None

    def add(self, check: str, inputs: dict, residual: float, tol: float, lhs=None, rhs=None, **extra):
        self.cases.append(Case(check, inputs, float(residual), float(tol), lhs, rhs, extra))

    def override_tol(self, tol: float | None):
        if tol is not None:
            for c in self.cases:
                c.tol = float(tol)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.cases), default=0.0)

    @property
    def max_normalized(self) -> float:
        return max((c.residual / c.tol for c in self.cases), default=0.0)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def failures(self):
        return [c for c in self.cases if not c.passed]

    def to_json(self, include_time: bool = False) -> dict:
        d = {"schema": SCHEMA, "suite": self.suite, "params": jsonable(self.params), "seed": self.seed,
             "samples": [c.to_json(i, self.suite == "integrals") for i, c in enumerate(self.cases)],
             "max_residual": _num(self.max_residual), "max_normalized_residual": _num(self.max_normalized),
             "pass": self.passed}
        if include_time and self.wall_time is not None:
            d["wall_time"] = round(self.wall_time, 3)
        return d

    def csv_rows(self):
        for i, c in enumerate(self.cases):
            lhs = c.lhs if isinstance(c.lhs, complex) else None
            rhs = c.rhs if isinstance(c.rhs, complex) else None
            yield [self.suite, i, c.check, json.dumps(jsonable(c.inputs), sort_keys=True),
                   "" if lhs is None else repr(lhs.real), "" if lhs is None else repr(lhs.imag),
                   "" if rhs is None else repr(rhs.real), "" if rhs is None else repr(rhs.imag),
                   repr(c.residual), repr(c.tol), int(c.passed)]

    def to_text(self, include_time: bool = False) -> str:
        lines = [f"suite {self.suite}  seed={self.seed}  params={json.dumps(jsonable(self.params), sort_keys=True)}"]
        for i, c in enumerate(self.cases):
            flag = "ok  " if c.passed else "FAIL"
            lines.append(f"  [{flag}] {i:3d} {c.check:<28s} residual={c.residual:.3e} tol={c.tol:.1e}  "
                         f"{json.dumps(jsonable(c.inputs), sort_keys=True)}")
        status = "PASS" if self.passed else "FAIL"
        tail = f"  {status}: {len(self.cases)} cases, max residual {self.max_residual:.3e}"
        if include_time and self.wall_time is not None:
            tail += f", {self.wall_time:.2f} s"
        lines.append(tail)
        return "\n".join(lines)


def render_reports(reports: list, fmt: str, include_time: bool = False) -> str:
    """Serialise one or more reports in json, csv or text form."""
    if fmt == "json":
        if len(reports) == 1:
            body = reports[0].to_json(include_time)
        else:
            body = {"schema": SCHEMA, "reports": [r.to_json(include_time) for r in reports],
                    "pass": all(r.passed for r in reports)}
        return json.dumps(body, indent=2, sort_keys=False)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in reports:
            for row in r.csv_rows():
                w.writerow(row)
        return buf.getvalue().rstrip("\n")
    if fmt == "text":
        return "\n".join(r.to_text(include_time) for r in reports)
    raise ValueError(f"unknown format {fmt!r}")
