"""Run report as a plain dict and its byte-stable JSON encoding.

Schema (``gridtrace.report/1``)::

    {
      "schema": "gridtrace.report/1",
      "engine": "eps" | "filtered",
      "elements": {"count": int, "by_type": {type: int}},
      "hypothetical_count": int,
      "stages": [{"name": str, "survivors": int}],   # filtered engine only
      "path_count": int,
      "customers": {id: {"active": [path], "backup": [path]}},
      "findings": [{"kind", "subjects", "detail", "step", "assignment"}],
      "passed": bool,
      "transforms": [{"step", "added", "removed", "replaced"}],
      "config": {key: value}
    }

where ``path`` is ``{"elements": [id, ...], "length": float}``. Keys are sorted
and every float is written with exactly six fractional digits.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from collections.abc import Iterable
from dataclasses import fields
from typing import Any

from .config import PipelineConfig
from .diagnostics import DiagnosticReport, Finding
from .model import ElementSet, Path, id_key, length_path
from .paths import PathSet, raw_count
from .transform import TransformTrace

SCHEMA = "gridtrace.report/1"


def _path_entry(p: Path, paths: PathSet, elements: ElementSet) -> dict:
    length = paths.lengths.get(p)
    if length is None:
        length = length_path(p, elements)
    return {"elements": list(p.elements), "length": float(length)}


def paths_document(paths: PathSet, elements: ElementSet) -> dict:
    customers = {}
    for c in sorted(paths.customers, key=id_key):
        if paths.classified:
            entry = {
                "active": [_path_entry(p, paths, elements) for p in paths.active_paths(c)],
                "backup": [_path_entry(p, paths, elements) for p in paths.backup_paths(c)],
            }
        else:
            entry = {"paths": [_path_entry(p, paths, elements) for p in paths.paths[c]]}
        customers[c] = entry
    return {
        "engine": paths.engine,
        "stages": [{"name": n, "survivors": k} for n, k in paths.stages],
        "path_count": len(paths),
        "customers": customers,
    }


def finding_document(f: Finding) -> dict:
    return {
        "kind": f.kind.value,
        "subjects": list(f.subjects),
        "detail": f.detail,
        "step": f.step,
        "assignment": dict(f.assignment) if f.assignment is not None else None,
    }


def trace_document(traces: Iterable[TransformTrace]) -> list[dict]:
    out = []
    for t in traces:
        out.append(
            {
                "step": t.step,
                "added": [ev.element_id for ev in t.events if ev.action == "added"],
                "removed": [ev.element_id for ev in t.events if ev.action == "removed"],
                "replaced": [ev.element_id for ev in t.events if ev.action == "replaced"],
            }
        )
    return out


def config_document(cfg: PipelineConfig) -> dict:
    doc = {}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if f.name == "insert":
            value = [e.id for e in value]
        elif isinstance(value, tuple):
            value = list(value)
        doc[f.name] = value
    return doc


def build_report(
    elements: ElementSet,
    paths: PathSet,
    diagnosis: DiagnosticReport,
    cfg: PipelineConfig,
    traces: Iterable[TransformTrace] = (),
) -> dict:
    by_type = Counter(e.element_type.value for e in elements.values())
    doc = paths_document(paths, elements)
    doc.update(
        {
            "schema": SCHEMA,
            "elements": {"count": len(elements), "by_type": dict(by_type)},
            "hypothetical_count": raw_count(elements),
            "findings": [finding_document(f) for f in diagnosis.findings],
            "passed": diagnosis.passed,
            "transforms": trace_document(traces),
            "config": config_document(cfg),
        }
    )
    return doc


def _encode(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot encode {value!r}")
        text = f"{value:.6f}"
        return "0.000000" if text == "-0.000000" else text
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_encode(value[k], indent, level + 1)}"
            for k in sorted(value, key=str)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def dumps(doc: Any, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys, six-digit fixed floats, trailing newline."""
    return _encode(doc, indent, 0) + "\n"
