"""File formats: polynomial and node JSON, reports (JSON/CSV), run manifests.

Complex values are records ``{"re": text, "im": text}``; exact components
are ``"p/q"`` strings and float components carry 17 significant digits.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import tempfile
import warnings
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import numpy as np
from gmpy2 import mpq

from .goncharov import NodeSequence
from .numeric import (
    ComplexFloat,
    GaussianRational,
    ScalarParseError,
    component_texts,
    float_text,
    parse_scalar,
    render,
)
from .poly import Poly, RootMultiset

FORMATS = ("json", "csv")


class SchemaError(ValueError):
    """Malformed document; ``field`` locates the offending entry."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"field {field!r}: {reason}")
        self.field = field


class ReportWriteError(OSError):
    """Writing an output file failed."""


# -- scalars, polynomials, nodes -------------------------------------------------

def scalar_record(x) -> dict:
    re_s, im_s = component_texts(x)
    return {"re": re_s, "im": im_s}


def _scalar_from(obj, field: str):
    if not isinstance(obj, (dict, str)):
        raise SchemaError(field, "expected a {re, im} record or scalar text")
    try:
        return parse_scalar(obj)
    except ScalarParseError as exc:
        raise SchemaError(field, str(exc)) from exc


def _scalar_list(doc, key: str) -> list:
    if not isinstance(doc, dict):
        raise SchemaError("<document>", "expected a JSON object")
    if key not in doc:
        raise SchemaError(key, "missing")
    items = doc[key]
    if not isinstance(items, list):
        raise SchemaError(key, "expected an array")
    return [_scalar_from(v, f"{key}[{i}]") for i, v in enumerate(items)]


def poly_to_json(f: Poly) -> dict:
    return {"coeffs": [scalar_record(c) for c in f.coeffs]}


def poly_from_json(doc) -> Poly:
    """Ascending ``coeffs``; zero leading coefficients are trimmed with a warning."""
    cs = _scalar_list(doc, "coeffs")
    kinds = {type(c) for c in cs}
    if len(kinds) > 1:
        raise SchemaError("coeffs", "mixes exact and decimal entries")
    if cs and cs[-1].is_zero():
        warnings.warn("leading zero coefficient(s) trimmed", UserWarning, stacklevel=2)
    return Poly(cs)


def nodes_to_json(nodes) -> dict:
    seq = nodes if isinstance(nodes, NodeSequence) else NodeSequence(nodes)
    return {"nodes": [scalar_record(z) for z in seq.nodes]}


def nodes_from_json(doc) -> NodeSequence:
    zs = _scalar_list(doc, "nodes")
    if not zs:
        raise SchemaError("nodes", "needs at least one node")
    if len({type(z) for z in zs}) > 1:
        raise SchemaError("nodes", "mixes exact and decimal entries")
    return NodeSequence(zs)


def load_json(path) -> Any:
    """Parse a JSON file; a missing file raises :class:`FileNotFoundError`."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("<document>", f"malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def load_poly_json(path) -> Poly:
    return poly_from_json(load_json(path))


def load_nodes_json(path) -> NodeSequence:
    return nodes_from_json(load_json(path))


# -- generic conversion -------------------------------------------------------------

def to_jsonable(obj) -> Any:
    """Plain JSON data; floats stay floats, exact values become strings."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, (GaussianRational, ComplexFloat)):
        return scalar_record(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return scalar_record(ComplexFloat(complex(obj)))
    if isinstance(obj, (Fraction, type(mpq(0)))):
        return render(GaussianRational(obj))
    if isinstance(obj, Poly):
        return poly_to_json(obj)
    if isinstance(obj, NodeSequence):
        return nodes_to_json(obj)
    if isinstance(obj, RootMultiset):
        return {"entries": [{"root": scalar_record(x), "multiplicity": r} for x, r in obj.entries]}
    if hasattr(obj, "to_dict") and callable(obj.to_dict):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items.sort(key=repr)
        return [to_jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj) -> str:
    """Deterministic JSON text with floats at 17 significant digits."""
    out = io.StringIO()
    _emit(to_jsonable(obj), out, 0)
    out.write("\n")
    return out.getvalue()


def _emit(v, out, depth: int) -> None:
    pad = "  " * (depth + 1)
    if isinstance(v, dict):
        if not v:
            out.write("{}")
            return
        out.write("{\n")
        for i, (k, x) in enumerate(v.items()):
            out.write(f"{pad}{json.dumps(k)}: ")
            _emit(x, out, depth + 1)
            out.write(",\n" if i < len(v) - 1 else "\n")
        out.write("  " * depth + "}")
    elif isinstance(v, list):
        if not v:
            out.write("[]")
            return
        out.write("[\n")
        for i, x in enumerate(v):
            out.write(pad)
            _emit(x, out, depth + 1)
            out.write(",\n" if i < len(v) - 1 else "\n")
        out.write("  " * depth + "]")
    elif isinstance(v, float):
        out.write(float_text(v))
    else:
        out.write(json.dumps(v))


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return float_text(v)
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return render(parse_scalar(v))
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def dumps_csv(rows) -> str:
    """Header from the first row's fields, one line per row."""
    rows = rows if isinstance(rows, (list, tuple)) else [rows]
    data = [to_jsonable(r) for r in rows]
    if any(not isinstance(d, dict) for d in data):
        raise TypeError("CSV rows must be records")
    header: list[str] = list(data[0]) if data else []
    for d in data[1:]:
        header += [k for k in d if k not in header]
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for d in data:
        w.writerow([_cell(d.get(k)) for k in header])
    return out.getvalue()


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    tmp = None
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if tmp is not None and os.path.exists(tmp):
            os.unlink(tmp)
        raise ReportWriteError(exc.errno, f"cannot write {path}: {exc.strerror or exc}") from exc


def write_report(report, path, format: Optional[str] = None) -> None:
    """Atomically write ``report`` as JSON or CSV (format defaults to the suffix)."""
    fmt = format or Path(path).suffix.lstrip(".").lower() or "json"
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; choose from {FORMATS}")
    text = dumps_json(report) if fmt == "json" else dumps_csv(report)
    write_text_atomic(path, text)


# -- run manifests --------------------------------------------------------------------

def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclasses.dataclass
class RunManifest:
    """What was run, with which inputs; enough to replay the command."""

    command: str
    argv: list
    config: dict
    version: str
    seeds: list
    input_digests: dict
    outputs: list
    started: str
    finished: str = ""
    exit_code: Optional[int] = None

    FILENAME = "manifest.json"

    def write(self, directory) -> Path:
        path = Path(directory) / self.FILENAME
        write_report(self, path, "json")
        return path

    @classmethod
    def load(cls, path) -> RunManifest:
        doc = load_json(path)
        if not isinstance(doc, dict):
            raise SchemaError("<document>", "expected a JSON object")
        names = [f.name for f in dataclasses.fields(cls)]
        for key in ("command", "argv"):
            if key not in doc:
                raise SchemaError(key, "missing")
        if not isinstance(doc["argv"], list) or not all(isinstance(a, str) for a in doc["argv"]):
            raise SchemaError("argv", "expected an array of strings")
        kwargs = {k: doc.get(k) for k in names}
        for key, empty in (("config", {}), ("seeds", []), ("input_digests", {}), ("outputs", [])):
            if kwargs[key] is None:
                kwargs[key] = empty
        kwargs["version"] = kwargs["version"] or ""
        kwargs["started"] = kwargs["started"] or ""
        kwargs["finished"] = kwargs["finished"] or ""
        return cls(**kwargs)
