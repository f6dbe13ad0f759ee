"""Element files and pipeline config files.

Element files are CSV with the header ``id,type,coords,status``. Coordinates
are ``x y`` pairs joined by ``;``, and the status column is only filled for
switches::

    id,type,coords,status
    e3,line,240 297;328 296,
    e9,switch,374 189,close

Config files are TOML with one key per threshold. See ``data/*.cfg``.
"""
from __future__ import annotations

import csv
import io
import os
import sys
from collections.abc import Iterable
from dataclasses import fields
from importlib import resources
from typing import IO, Any, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .config import PipelineConfig
from .errors import (
    ConfigError,
    DuplicateId,
    InvalidElement,
    InvalidThreshold,
    MissingStatusOnSwitch,
    ParseError,
    UnknownKey,
    UnknownType,
)
from .model import Element, ElementSet, ElementType, SwitchStatus

PathLike = Union[str, "os.PathLike[str]"]
Source = Union[PathLike, IO[str]]

HEADER = ("id", "type", "coords", "status")


def bundled(name: str) -> str:
    """Filesystem path of a bundled fixture or config, e.g. ``dso_network.csv``."""
    ref = resources.files("gridtrace") / "data" / name
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled file named {name!r}")
    return str(ref)


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        return source.read()
    with open(source, encoding="utf-8", newline="") as fh:
        return fh.read()


def parse_coords(text: str) -> tuple[tuple[float, float], ...]:
    coords = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"coordinate pair {chunk!r} does not have two values")
        coords.append((float(parts[0]), float(parts[1])))
    if not coords:
        raise ValueError("no coordinates")
    return tuple(coords)


def parse_record(row: list[str], line: int | None = None) -> Element:
    """One CSV row to an :class:`Element`, with errors tagged by line number."""
    row = [cell.strip() for cell in row]
    if len(row) == 3:
        row.append("")
    if len(row) != 4:
        raise ParseError(f"expected 4 columns, got {len(row)}", line)
    eid, type_text, coord_text, status_text = row
    if not eid:
        raise ParseError("empty id", line)
    try:
        etype = ElementType.parse(type_text)
    except ValueError:
        raise UnknownType(f"unknown element type {type_text!r}", line) from None
    try:
        coords = parse_coords(coord_text)
    except ValueError as exc:
        raise ParseError(f"{eid}: bad coordinates ({exc})", line) from None
    status = None
    if status_text:
        try:
            status = SwitchStatus(status_text.lower())
        except ValueError:
            raise ParseError(f"{eid}: unknown status {status_text!r}", line) from None
    elif etype is ElementType.SWITCH:
        raise MissingStatusOnSwitch(f"{eid}: switch without status", line)
    try:
        return Element(eid, etype, coords, status)
    except InvalidElement as exc:
        raise ParseError(str(exc), line) from None


def load_elements(source: Source) -> ElementSet:
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    elements: list[Element] = []
    seen: dict[str, int] = {}
    header_seen = False
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row) or row[0].lstrip().startswith("#"):
            continue
        if not header_seen:
            header_seen = True
            if tuple(c.strip().lower() for c in row) == HEADER:
                continue
        e = parse_record(row, line)
        if e.id in seen:
            raise DuplicateId(f"id {e.id!r} already defined on line {seen[e.id]}", line)
        seen[e.id] = line
        elements.append(e)
    return ElementSet(elements)


def format_number(v: float) -> str:
    # repr round-trips exactly; integral values drop the trailing ".0"
    text = repr(float(v))
    if text.endswith(".0"):
        text = text[:-2]
    if text == "-0":
        text = "0"
    return text


def format_coords(coords: Iterable[tuple[float, float]]) -> str:
    return ";".join(f"{format_number(x)} {format_number(y)}" for x, y in coords)


def element_row(e: Element) -> list[str]:
    status = e.status.value if e.status is not None and e.element_type is ElementType.SWITCH else ""
    return [e.id, e.element_type.value, format_coords(e.coords), status]


def dumps_elements(elements: Iterable[Element]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for e in elements:
        writer.writerow(element_row(e))
    return buf.getvalue()


def write_elements(elements: ElementSet, target: Source) -> None:
    text = dumps_elements(elements.values())
    if hasattr(target, "write"):
        target.write(text)
        return
    with open(target, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


_INT_KEYS = {"N", "M", "cap", "switch_limit"}
_FLOAT_KEYS = {"R", "L", "D_p", "D_oh", "D_cab", "D_cb", "min_line_length"}
_LIST_KEYS = {"steps", "constraints", "insert"}


def _coerce(key: str, value: Any) -> Any:
    if key in _FLOAT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidThreshold(f"{key} must be a number, got {value!r}")
        return float(value)
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidThreshold(f"{key} must be an integer, got {value!r}")
        return value
    if key in _LIST_KEYS:
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ConfigError(f"{key} must be a list of strings")
        if key == "insert":
            return tuple(parse_record(next(csv.reader([row])), None) for row in value)
        return tuple(value)
    if key == "sweep_switches":
        if not isinstance(value, bool):
            raise ConfigError("sweep_switches must be true or false")
        return value
    if key == "hop_rule":
        if not isinstance(value, str):
            raise ConfigError("hop_rule must be a string")
        return value
    raise UnknownKey(f"unknown config key {key!r}")


def config_from_mapping(data: dict[str, Any], **overrides: Any) -> PipelineConfig:
    known = set(PipelineConfig.keys())
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise UnknownKey(f"unknown config key {key!r}")
        kwargs[key] = _coerce(key, value)
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig(**kwargs)


def load_config(source: Source | None = None, **overrides: Any) -> PipelineConfig:
    """Read a TOML config; missing keys keep their defaults.

    ``overrides`` (for instance ``cap`` from the command line) win over the file.
    """
    if source is None:
        return config_from_mapping({}, **overrides)
    text = _read_text(source)
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from None
    return config_from_mapping(data, **overrides)


def _toml_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return "[" + ", ".join(_toml_value(x) for x in v) + "]"


def dumps_config(cfg: PipelineConfig) -> str:
    """TOML text that :func:`load_config` turns back into ``cfg``."""
    out = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if f.name == "insert":
            value = [",".join(element_row(e)) for e in value]
        out.append(f"{f.name} = {_toml_value(value)}")
    return "\n".join(out) + "\n"
