"""Command-line entry point.

Exit codes
----------
====  =====================================================
0     success (``pipeline``/``diagnose``: no findings)
1     diagnose reported findings
2     bad command-line usage
3     input/output failure (missing file, permission, ...)
10+   library errors, one code per error class; see
      ``gridtrace exit-codes`` or :func:`exit_code_table`
====  =====================================================

The log level comes from the ``GRIDTRACE_LOG`` environment variable
(``DEBUG``, ``INFO``, ``WARNING``; default ``WARNING``).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import shutil
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__, kernels
from .config import PipelineConfig
from .diagnostics import DiagnosticReport, diagnose
from .errors import GridTraceError, all_error_types
from .io import bundled, dumps_config, load_config, load_elements, write_elements
from .model import ElementSet, id_key
from .paths import PathSet, classify, enumerate_paths, raw_count
from .render import FORMATS, render
from .report import build_report, dumps, paths_document, trace_document
from .transform import TransformTrace, apply_pipeline

log = logging.getLogger("gridtrace")

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_IO = 3

COMMANDS = ("size", "transform", "enumerate", "diagnose", "classify", "render", "report", "pipeline")


def exit_code_table() -> dict[str, int]:
    table = {
        "ok": EXIT_OK,
        "findings": EXIT_FINDINGS,
        "usage": EXIT_USAGE,
        "io": EXIT_IO,
    }
    for cls in all_error_types():
        table[cls.__name__] = cls.exit_code
    return table


def _resolve(path: str | None) -> str | None:
    # bare names of bundled fixtures work from any directory
    if path is None or os.path.exists(path):
        return path
    if os.path.basename(path) == path:
        try:
            return bundled(path)
        except FileNotFoundError:
            pass
    return path


@dataclass
class Run:
    elements_path: str
    config_path: str | None
    raw: ElementSet
    cfg: PipelineConfig
    elements: ElementSet | None = None
    traces: list[TransformTrace] = field(default_factory=list)
    paths: PathSet | None = None
    diagnosis: DiagnosticReport | None = None

    def transform(self) -> "Run":
        self.elements, self.traces = apply_pipeline(self.raw, self.cfg)
        return self

    def enumerate(self, oracle: bool) -> "Run":
        if self.elements is None:
            self.transform()
        self.paths = enumerate_paths(self.elements, self.cfg, oracle=oracle)
        return self

    def classify(self) -> "Run":
        self.paths = classify(self.paths, self.elements)
        return self

    def diagnose(self) -> "Run":
        self.diagnosis = diagnose(self.elements, self.paths, self.cfg, self.traces)
        return self

    def report(self) -> dict:
        return build_report(self.elements, self.paths, self.diagnosis, self.cfg, self.traces)


def _start(args: argparse.Namespace) -> Run:
    elements_path = _resolve(args.elements)
    config_path = _resolve(getattr(args, "config", None))
    raw = load_elements(elements_path)
    cfg = load_config(config_path, cap=getattr(args, "cap", None))
    log.info("loaded %d elements from %s (backend=%s)", len(raw), elements_path, kernels.BACKEND)
    return Run(elements_path, config_path, raw, cfg)


def _emit(text: str, out: str | None, default_name: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    target = os.path.join(out, default_name) if os.path.isdir(out) else out
    parent = os.path.dirname(os.path.abspath(target))
    os.makedirs(parent, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    log.info("wrote %s", target)


def _full(args: argparse.Namespace) -> Run:
    return _start(args).transform().enumerate(args.oracle).classify().diagnose()


def cmd_size(args: argparse.Namespace) -> int:
    raw = load_elements(_resolve(args.elements))
    print(raw_count(raw))
    return EXIT_OK


def cmd_transform(args: argparse.Namespace) -> int:
    run = _start(args).transform()
    if args.out is not None and (os.path.isdir(args.out) or args.out.endswith(os.sep)):
        os.makedirs(args.out, exist_ok=True)
        write_elements(run.elements, os.path.join(args.out, "transformed.csv"))
        _emit(dumps(trace_document(run.traces)), os.path.join(args.out, "traces.json"), "traces.json")
    elif args.out is not None:
        write_elements(run.elements, args.out)
    else:
        write_elements(run.elements, sys.stdout)
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    run = _start(args).transform().enumerate(args.oracle)
    _emit(dumps(paths_document(run.paths, run.elements)), args.out, "paths.json")
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    run = _start(args).transform().enumerate(args.oracle).classify()
    if args.out is not None:
        _emit(dumps(paths_document(run.paths, run.elements)), args.out, "paths.json")
        return EXIT_OK
    for c in sorted(run.paths.customers, key=id_key):
        for p in run.paths.active_paths(c):
            print(f"{c}\tactive\t{','.join(p.elements)}")
        for p in run.paths.backup_paths(c):
            print(f"{c}\tbackup\t{','.join(p.elements)}")
    return EXIT_OK


def cmd_diagnose(args: argparse.Namespace) -> int:
    run = _full(args)
    if args.out is not None:
        _emit(dumps(run.report()), args.out, "report.json")
    else:
        for f in run.diagnosis.findings:
            step = f" [{f.step}]" if f.step else ""
            print(f"{f.kind.value}\t{','.join(f.subjects)}\t{f.detail}{step}")
        print("passed" if run.diagnosis.passed else f"failed: {len(run.diagnosis.findings)} finding(s)")
    return EXIT_OK if run.diagnosis.passed else EXIT_FINDINGS


def cmd_render(args: argparse.Namespace) -> int:
    run = _start(args).transform().enumerate(args.oracle).classify()
    fmt = args.format or "svg"
    _emit(render(run.elements, run.paths, fmt), args.out, f"network.{fmt}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    run = _full(args)
    _emit(dumps(run.report()), args.out, "report.json")
    return EXIT_OK


def _sha256(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def write_bundle(run: Run, out: str, oracle: bool) -> dict:
    """Write every artifact of a pipeline run into ``out`` and return the manifest."""
    os.makedirs(out, exist_ok=True)
    artifacts = {}

    def put(name: str, text: str) -> None:
        target = os.path.join(out, name)
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        artifacts[name] = target

    shutil.copyfile(run.elements_path, os.path.join(out, "input.csv"))
    artifacts["input.csv"] = os.path.join(out, "input.csv")
    put("config.toml", dumps_config(run.cfg))
    write_elements(run.elements, os.path.join(out, "transformed.csv"))
    artifacts["transformed.csv"] = os.path.join(out, "transformed.csv")
    put("traces.json", dumps(trace_document(run.traces)))
    put("paths.json", dumps(paths_document(run.paths, run.elements)))
    put("report.json", dumps(run.report()))
    put("network.dot", render(run.elements, run.paths, "dot"))
    put("network.svg", render(run.elements, run.paths, "svg"))
    manifest = {
        "tool": "gridtrace",
        "version": __version__,
        "backend": kernels.BACKEND,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "input": os.path.abspath(run.elements_path),
        "config": os.path.abspath(run.config_path) if run.config_path else None,
        "engine": "filtered" if oracle else "eps",
        "passed": run.diagnosis.passed,
        "artifacts": {name: _sha256(path) for name, path in sorted(artifacts.items())},
        "replay": "gridtrace pipeline --elements input.csv --config config.toml"
        + (" --oracle" if oracle else ""),
    }
    with open(os.path.join(out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def cmd_pipeline(args: argparse.Namespace) -> int:
    run = _full(args)
    out = args.out or "gridtrace-run"
    write_bundle(run, out, args.oracle)
    for name, k in run.paths.stages:
        print(f"{name}\t{k}")
    print(f"paths\t{len(run.paths)}")
    print("passed" if run.diagnosis.passed else f"failed: {len(run.diagnosis.findings)} finding(s)")
    print(f"bundle\t{out}")
    return EXIT_OK if run.diagnosis.passed else EXIT_FINDINGS


HANDLERS = {
    "size": cmd_size,
    "transform": cmd_transform,
    "enumerate": cmd_enumerate,
    "diagnose": cmd_diagnose,
    "classify": cmd_classify,
    "render": cmd_render,
    "report": cmd_report,
    "pipeline": cmd_pipeline,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridtrace",
        description="Reconstruct distribution-network paths from element records.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p: argparse.ArgumentParser, config: bool = True) -> None:
        p.add_argument("--elements", required=True, help="element CSV (or the name of a bundled fixture)")
        if config:
            p.add_argument("--config", help="TOML config; defaults apply when omitted")
            p.add_argument("--out", help="output file or directory")
            p.add_argument("--oracle", action="store_true", help="use the generate-and-filter engine")
            p.add_argument("--cap", type=int, help="refuse oracle runs above this many hypotheses")

    common(sub.add_parser("size", help="print the number of hypothetical paths"), config=False)
    common(sub.add_parser("transform", help="apply the configured transformation steps"))
    common(sub.add_parser("enumerate", help="list compatible paths per customer"))
    common(sub.add_parser("classify", help="split paths into active and backup"))
    common(sub.add_parser("diagnose", help="check paths and list findings"))
    p = sub.add_parser("render", help="draw the network with its paths")
    common(p)
    p.add_argument("--format", choices=FORMATS, default="svg")
    common(sub.add_parser("report", help="write the JSON report"))
    common(sub.add_parser("pipeline", help="run every stage and write a run bundle"))
    sub.add_parser("exit-codes", help="print the exit code table")
    return parser


def _configure_logging() -> None:
    level = os.environ.get("GRIDTRACE_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "exit-codes":
        for name, code in sorted(exit_code_table().items(), key=lambda kv: (kv[1], kv[0])):
            print(f"{code}\t{name}")
        return EXIT_OK
    try:
        return HANDLERS[args.command](args)
    except GridTraceError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
