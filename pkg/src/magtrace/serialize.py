"""File formats and canonical report emission.

Operators travel as JSON objects {"entries": [{"j","k","re","im"}...],
"class": ...}; test functions as {"nodes": [[eps, value], ...]}; grid
functions as CSV with columns (x1, x2, re, im).  JSON reports are emitted
canonically: keys sorted, floats at 17 significant digits, so parsing and
re-emitting a report is byte identical.
"""

from __future__ import annotations

import io
import json
import math

import numpy as np

from .dos import CompactTestFunction
from .errors import DomainError
from .extrapolate import ConvergenceTable
from .kernels import GridFunction, GridSpec
from .operators import CoefficientOperator, OPERATOR_CLASSES


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise DomainError("reports may not contain non-finite numbers")
    text = format(float(value), ".17g")
    return text


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed float formatting."""
    out = io.StringIO()
    _emit(obj, out)
    return out.getvalue()


def _emit(obj, out) -> None:
    if obj is None or isinstance(obj, bool):
        out.write(json.dumps(obj))
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, float):
        out.write(format_float(obj))
    elif isinstance(obj, complex):
        _emit({"im": obj.imag, "re": obj.real}, out)
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif isinstance(obj, dict):
        out.write("{")
        for pos, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise DomainError("report keys must be strings")
            if pos:
                out.write(", ")
            out.write(json.dumps(key))
            out.write(": ")
            _emit(obj[key], out)
        out.write("}")
    elif isinstance(obj, (list, tuple)):
        out.write("[")
        for pos, item in enumerate(obj):
            if pos:
                out.write(", ")
            _emit(item, out)
        out.write("]")
    elif isinstance(obj, (np.integer,)):
        out.write(str(int(obj)))
    elif isinstance(obj, (np.floating,)):
        out.write(format_float(float(obj)))
    else:
        raise DomainError("cannot serialize %r" % type(obj))


def operator_to_dict(op: CoefficientOperator) -> dict:
    entries = [{"j": j, "k": k, "re": v.real, "im": v.imag}
               for (j, k), v in sorted(op.entries.items())]
    return {"entries": entries, "class": op.declared_class}


def operator_from_dict(data: dict) -> CoefficientOperator:
    if not isinstance(data, dict):
        raise DomainError("an operator document must be a JSON object")
    declared = data.get("class", "unclassified")
    if declared not in OPERATOR_CLASSES:
        raise DomainError("unknown operator class %r" % (declared,))
    items = data.get("entries", [])
    if not isinstance(items, list):
        raise DomainError("operator entries must form a JSON array")
    entries = {}
    for pos, item in enumerate(items):
        if not isinstance(item, dict) or "j" not in item or "k" not in item:
            raise DomainError("operator entry %d must be an object with "
                              "j and k indices" % pos)
        try:
            key = (int(item["j"]), int(item["k"]))
            value = complex(float(item.get("re", 0.0)),
                            float(item.get("im", 0.0)))
        except (TypeError, ValueError):
            raise DomainError("operator entry %d has non-numeric fields" % pos)
        entries[key] = entries.get(key, 0.0) + value
    return CoefficientOperator(entries, declared)


def save_operator(op: CoefficientOperator, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(canonical_json(operator_to_dict(op)))
        handle.write("\n")


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise DomainError("%s is not valid JSON: %s" % (path, exc))


def load_operator(path: str) -> CoefficientOperator:
    return operator_from_dict(_load_json(path))


def load_test_function(path: str) -> CompactTestFunction:
    data = _load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("nodes"), list):
        raise DomainError("a test function document needs a nodes array")
    try:
        nodes = tuple((float(e), float(v)) for e, v in data["nodes"])
    except (TypeError, ValueError):
        raise DomainError("test function nodes must be [eps, value] pairs")
    return CompactTestFunction(nodes=nodes)


def _cell(value) -> str:
    if isinstance(value, complex):
        if value.imag == 0.0:
            return format_float(value.real)
        return "%s%+sj" % (format_float(value.real), format_float(value.imag))
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(float(value))


def table_to_csv(table: ConvergenceTable) -> str:
    lines = ["param,raw,accelerated,extrapolated,residual"]
    residual = table.residual if math.isfinite(table.residual) else None
    for pos, (param, raw, acc) in enumerate(table.rows()):
        tail = (_cell(table.extrapolated), _cell(residual)) if pos == 0 \
            else ("", "")
        lines.append(",".join([_cell(param), _cell(raw), _cell(acc), *tail]))
    return "\n".join(lines) + "\n"


def table_to_dict(table: ConvergenceTable) -> dict:
    return {
        "model": table.model,
        "params": list(table.params),
        "raw": [complex(v) for v in table.raw],
        "accelerated": None if table.accelerated is None
        else [complex(v) for v in table.accelerated],
        "extrapolated": complex(table.extrapolated),
        "residual": table.residual if math.isfinite(table.residual) else None,
        "converged": table.converged,
    }


def grid_to_csv(fn: GridFunction) -> str:
    axis = fn.spec.axis()
    lines = ["x1,x2,re,im"]
    for i, x1 in enumerate(axis):
        for j, x2 in enumerate(axis):
            v = fn.values[i, j]
            lines.append(",".join([format_float(x1), format_float(x2),
                                   format_float(v.real), format_float(v.imag)]))
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str, spec: GridSpec) -> GridFunction:
    rows = text.strip().splitlines()[1:]
    values = np.zeros((spec.nodes, spec.nodes), dtype=complex)
    axis = spec.axis()
    lookup = {format_float(x): i for i, x in enumerate(axis)}
    for row in rows:
        x1, x2, re, im = row.split(",")
        values[lookup[x1], lookup[x2]] = complex(float(re), float(im))
    return GridFunction(spec, values)
