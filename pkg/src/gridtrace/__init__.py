"""Reconstruct distribution-network connectivity and identify customer supply paths."""
from __future__ import annotations

__version__ = "0.1.0"

from .config import PipelineConfig
from .diagnostics import (
    DiagnosticReport,
    Finding,
    FindingKind,
    check_unique_active,
    diagnose,
    implicate_step,
    sweep_switch_states,
)
from .errors import GridTraceError
from .io import bundled, load_config, load_elements, write_elements
from .model import (
    Element,
    ElementSet,
    ElementType,
    Path,
    SwitchStatus,
    closest,
    dist,
    length_path,
    subset,
)
from .paths import (
    Constraints,
    PathSet,
    classify,
    enumerate_eps,
    enumerate_filtered,
    enumerate_paths,
    hypothetical_count,
    paths_for_customer,
)
from .render import render
from .transform import (
    TransformTrace,
    apply_pipeline,
    connect_customers,
    link_boards_to_poles,
    locate_switches,
    replay,
    snap_overhead,
    stitch_underground_to_cabinets,
)

__all__ = [
    "Constraints",
    "DiagnosticReport",
    "Element",
    "ElementSet",
    "ElementType",
    "Finding",
    "FindingKind",
    "GridTraceError",
    "Path",
    "PathSet",
    "PipelineConfig",
    "SwitchStatus",
    "TransformTrace",
    "apply_pipeline",
    "bundled",
    "check_unique_active",
    "classify",
    "closest",
    "connect_customers",
    "diagnose",
    "dist",
    "enumerate_eps",
    "enumerate_filtered",
    "enumerate_paths",
    "hypothetical_count",
    "implicate_step",
    "length_path",
    "link_boards_to_poles",
    "load_config",
    "load_elements",
    "locate_switches",
    "paths_for_customer",
    "render",
    "replay",
    "snap_overhead",
    "stitch_underground_to_cabinets",
    "subset",
    "sweep_switch_states",
    "write_elements",
]
