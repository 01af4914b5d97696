"""Report assembly and serialisation.

JSON is canonical (sorted keys, fixed float repr); CSV is a projection of the
``rows`` table; text is a one-line-per-claim summary.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

SCHEMA_VERSION = 1
FORMATS = ("json", "csv", "text")


def claim(claim_id, description, passed, **detail):
    """One checked statement. ``passed`` is True, False or None (not applicable)."""
    out = {"id": claim_id, "description": description,
           "passed": None if passed is None else bool(passed)}
    out.update(detail)
    return out


def make_report(subcommand, config, tolerances, claims, rows=None, data=None):
    return {
        "schema_version": SCHEMA_VERSION,
        "subcommand": subcommand,
        "config": config,
        "tolerances": tolerances,
        "claims": list(claims),
        "all_passed": all(c["passed"] is not False for c in claims),
        "rows": list(rows or []),
        "data": data or {},
    }


def exit_code(report):
    return 0 if report["all_passed"] else 1


def _plain(obj):
    """Convert numpy / complex / Fraction values to JSON-native structures."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isnan(x):
            return "nan"
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def to_json(report):
    return json.dumps(_plain(report), sort_keys=True, indent=2) + "\n"


def to_csv(report, columns=None):
    rows = _plain(report["rows"])
    if columns is None:
        columns = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        vals = []
        for c in columns:
            v = r.get(c, "")
            if isinstance(v, (list, dict)):
                v = json.dumps(v, sort_keys=True)
            elif v is None:
                v = ""
            vals.append(v)
        w.writerow(vals)
    return buf.getvalue()


def to_text(report):
    lines = [f"{report['subcommand']} (schema {report['schema_version']})"]
    for key in sorted(report["config"]):
        lines.append(f"  config {key} = {_plain(report['config'][key])}")
    for key in sorted(report["tolerances"]):
        lines.append(f"  tol {key} = {report['tolerances'][key]}")
    for c in report["claims"]:
        status = {True: "PASS", False: "FAIL", None: "N/A"}[c["passed"]]
        lines.append(f"{status}  {c['id']}: {c['description']}")
    lines.append("ALL PASSED" if report["all_passed"] else "SOME CLAIMS FAILED")
    return "\n".join(lines) + "\n"


def render(report, fmt, columns=None):
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report, columns)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
