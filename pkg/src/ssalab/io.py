"""Text formats for states, mixtures and verification reports.

State file (JSON)::

    {
      "format": "ssalab-state",
      "dims": [2, 2],
      "matrix": [
        [0.5, 0],
        ...
      ]
    }

``matrix`` lists the entries row-major as ``[re, im]`` pairs, each number
written with 17 significant digits so that doubles survive a round trip.
A mixture file holds ``"weights"`` and a list of state objects under
``"components"``.  Reports are written as a JSON array or as CSV with a
fixed header.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict

import numpy as np

from . import __version__
from .errors import PreconditionError
from .states import Mixture
from .tensor import MAX_TOTAL_DIM, DensityMatrix
from .verify import VerificationReport

STATE_FORMAT = "ssalab-state"
MIXTURE_FORMAT = "ssalab-mixture"

REPORT_FIELDS = (
    "check_name",
    "kind",
    "lhs",
    "rhs",
    "residual",
    "tolerance",
    "passed",
    "seed",
    "timestamp",
    "tool_version",
    "context",
)


class FormatError(PreconditionError):
    """Malformed state, mixture or report text."""


def _num(x: float) -> str:
    s = format(float(x) + 0.0, ".17g")  # + 0.0 folds -0.0, which JSON reads back as int 0
    if s in ("nan", "inf", "-inf"):
        raise FormatError(f"non-finite entry {s}")
    return s


def _state_body(rho: DensityMatrix, indent: str) -> str:
    flat = rho.mat.ravel()
    rows = [f'{indent}    [{_num(z.real)}, {_num(z.imag)}]' for z in flat]
    return (
        f'{indent}  "format": "{STATE_FORMAT}",\n'
        f'{indent}  "dims": [{", ".join(str(d) for d in rho.dims)}],\n'
        f'{indent}  "matrix": [\n' + ",\n".join(rows) + f"\n{indent}  ]"
    )


def dumps_state(rho: DensityMatrix) -> str:
    return "{\n" + _state_body(rho, "") + "\n}\n"


def _state_from_obj(obj, where="state", max_dim=MAX_TOTAL_DIM) -> DensityMatrix:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    if obj.get("format", STATE_FORMAT) != STATE_FORMAT:
        raise FormatError(f"{where}: unexpected format {obj.get('format')!r}")
    for key in ("dims", "matrix"):
        if key not in obj:
            raise FormatError(f"{where}: missing field {key!r}")
    dims = obj["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise FormatError(f"{where}.dims: expected a list of positive integers, got {dims!r}")
    total = int(np.prod(dims))
    if total > max_dim:
        raise FormatError(f"{where}.dims: total dimension {total} exceeds cap {max_dim}")
    entries = obj["matrix"]
    if not isinstance(entries, list) or len(entries) != total * total:
        n = len(entries) if isinstance(entries, list) else "?"
        raise FormatError(f"{where}.matrix: expected {total * total} entries for dims {dims}, got {n}")
    vals = np.empty(total * total, dtype=complex)
    for i, pair in enumerate(entries):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(v, (int, float)) for v in pair)):
            raise FormatError(f"{where}.matrix[{i}]: expected [re, im], got {pair!r}")
        vals[i] = complex(pair[0], pair[1])
    return DensityMatrix(tuple(dims), vals.reshape(total, total), max_dim=max_dim)


def _loads(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def loads_state(text: str, max_dim=MAX_TOTAL_DIM) -> DensityMatrix:
    return _state_from_obj(_loads(text, "state"), max_dim=max_dim)


def dumps_mixture(mixture: Mixture) -> str:
    comps = ",\n".join("    {\n" + _state_body(c, "    ") + "\n    }" for c in mixture.components)
    return (
        "{\n"
        f'  "format": "{MIXTURE_FORMAT}",\n'
        f'  "weights": [{", ".join(_num(w) for w in mixture.weights)}],\n'
        '  "components": [\n' + comps + "\n  ]\n}\n"
    )


def loads_mixture(text: str, max_dim=MAX_TOTAL_DIM) -> Mixture:
    obj = _loads(text, "mixture")
    if not isinstance(obj, dict) or obj.get("format") != MIXTURE_FORMAT:
        raise FormatError("mixture: expected an object with format 'ssalab-mixture'")
    comps = obj.get("components")
    if not isinstance(comps, list):
        raise FormatError("mixture.components: expected a list")
    states = tuple(_state_from_obj(c, f"mixture.components[{i}]", max_dim) for i, c in enumerate(comps))
    return Mixture(tuple(obj.get("weights", ())), states)


def save_state(path, rho: DensityMatrix) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_state(rho))


def load_state(path, max_dim=MAX_TOTAL_DIM) -> DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if '"ssalab-mixture"' in text:
        return loads_mixture(text, max_dim).mix()
    return loads_state(text, max_dim)


def save_mixture(path, mixture: Mixture) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_mixture(mixture))


def load_mixture(path, max_dim=MAX_TOTAL_DIM) -> Mixture:
    with open(path, encoding="utf-8") as fh:
        return loads_mixture(fh.read(), max_dim)


# -- reports -----------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


def report_record(report: VerificationReport, timestamp: str, version: str = __version__) -> dict:
    d = asdict(report)
    rec = {k: d[k] for k in REPORT_FIELDS if k in d}
    rec["timestamp"] = timestamp
    rec["tool_version"] = version
    rec["context"] = _jsonable(d["context"])
    return {k: rec[k] for k in REPORT_FIELDS}


def dumps_reports_json(records) -> str:
    return json.dumps(list(records), indent=2) + "\n"


def loads_reports_json(text: str) -> list:
    recs = _loads(text, "reports")
    if not isinstance(recs, list) or any(not isinstance(r, dict) or set(r) != set(REPORT_FIELDS) for r in recs):
        raise FormatError(f"reports: expected a list of records with fields {list(REPORT_FIELDS)}")
    return recs


def dumps_reports_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(REPORT_FIELDS)
    for r in records:
        row = []
        for k in REPORT_FIELDS:
            v = r[k]
            if k == "context":
                v = json.dumps(v, separators=(",", ":"))
            elif isinstance(v, bool):
                v = "true" if v else "false"
            elif v is None:
                v = ""
            elif isinstance(v, float):
                v = repr(v)
            row.append(v)
        w.writerow(row)
    return buf.getvalue()


def loads_reports_csv(text: str) -> list:
    rows = list(csv.reader(io.StringIO(text, newline="")))
    if not rows or tuple(rows[0]) != REPORT_FIELDS:
        raise FormatError(f"reports csv: header must be {','.join(REPORT_FIELDS)}")
    out = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(REPORT_FIELDS):
            raise FormatError(f"reports csv line {i}: expected {len(REPORT_FIELDS)} fields, got {len(row)}")
        r = dict(zip(REPORT_FIELDS, row))
        try:
            for k in ("lhs", "rhs", "residual", "tolerance"):
                r[k] = float(r[k])
            r["passed"] = {"true": True, "false": False}[r["passed"]]
            r["seed"] = int(r["seed"]) if r["seed"] else None
            r["context"] = json.loads(r["context"])
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise FormatError(f"reports csv line {i}: {exc}") from None
        out.append(r)
    return out


def dumps_reports(records, fmt: str) -> str:
    if fmt == "json":
        return dumps_reports_json(records)
    if fmt == "csv":
        return dumps_reports_csv(records)
    raise PreconditionError(f"unknown report format {fmt!r}")


def loads_reports(text: str, fmt: str) -> list:
    return loads_reports_json(text) if fmt == "json" else loads_reports_csv(text)
