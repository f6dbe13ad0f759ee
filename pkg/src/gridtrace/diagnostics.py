"""Checks a path set against the configured rules and reports what looks wrong.

Problems are returned as :class:`Finding` records rather than raised. When
transformation traces are supplied, each finding names the most recent step
that touched one of its subjects, as a hint for which rule to revisit.
"""
from __future__ import annotations

import enum
import itertools
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace

import networkx as nx

from .config import (
    CARDINALITY,
    HOP,
    LENGTH,
    NO_REPEAT_TYPE,
    PipelineConfig,
)
from .errors import SwitchSpaceTooLarge
from .model import LINE_TYPES, ElementSet, ElementType, SwitchStatus, id_key, length_path
from .paths import Constraints, Network, PathSet, classify
from .transform import TransformTrace


class FindingKind(str, enum.Enum):
    DISCONNECTED_ELEMENT = "DisconnectedElement"
    CUSTOMER_WITHOUT_PATH = "CustomerWithoutPath"
    MULTIPLE_ACTIVE_PATHS = "MultipleActivePaths"
    PATH_TOO_LONG = "PathTooLong"
    PATH_TOO_SHORT = "PathTooShort"
    RING_DETECTED = "RingDetected"
    CONSECUTIVE_SAME_TYPE = "ConsecutiveSameType"
    CARDINALITY_VIOLATION = "CardinalityViolation"
    TRANSFORMER_OVER_CAPACITY = "TransformerOverCapacity"


_KIND_ORDER = {k: i for i, k in enumerate(FindingKind)}


@dataclass(frozen=True)
class Finding:
    kind: FindingKind
    subjects: tuple[str, ...]
    detail: str = ""
    step: str | None = None
    assignment: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self) -> None:
        if self.kind is FindingKind.RING_DETECTED and len(self.subjects) < 3:
            raise ValueError("a ring involves at least three elements")
        if not self.subjects:
            raise ValueError("a finding needs at least one subject")

    def sort_key(self) -> tuple:
        return (_KIND_ORDER[self.kind], tuple(id_key(s) for s in self.subjects), self.detail)


@dataclass(frozen=True)
class DiagnosticReport:
    findings: tuple[Finding, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.findings

    def kinds(self) -> set[FindingKind]:
        return {f.kind for f in self.findings}

    def of_kind(self, kind: FindingKind) -> list[Finding]:
        return [f for f in self.findings if f.kind is kind]


@dataclass(frozen=True)
class SwitchAssignment:
    states: tuple[tuple[str, str], ...]
    active_counts: Mapping[str, int] = field(default_factory=dict)

    @property
    def radial(self) -> bool:
        return all(n == 1 for n in self.active_counts.values())


def _hop_graph(elements: ElementSet, cfg: PipelineConfig) -> nx.Graph:
    cons = Constraints(names=(HOP,), R=cfg.R, hop_rule=cfg.hop_rule)
    adjacency = Network(elements, cons).adjacency()
    g = nx.Graph()
    g.add_nodes_from(elements)
    for u, nbrs in adjacency.items():
        for v in nbrs:
            g.add_edge(u, v)
    return g


def check_disconnected(elements: ElementSet, graph: nx.Graph) -> list[Finding]:
    fed = set()
    for comp in nx.connected_components(graph):
        if any(elements[i].element_type is ElementType.TRANSFORMER for i in comp):
            fed |= comp
    return [
        Finding(FindingKind.DISCONNECTED_ELEMENT, (eid,), "not connected to any transformer")
        for eid in elements
        if eid not in fed
    ]


def check_rings(elements: ElementSet, graph: nx.Graph) -> list[Finding]:
    closed = graph.subgraph(eid for eid in graph if not elements[eid].is_open)
    findings = []
    for cycle in nx.cycle_basis(closed):
        if len(cycle) < 3:
            continue
        # rotate to the smallest id for a stable representation
        k = min(range(len(cycle)), key=lambda i: id_key(cycle[i]))
        ring = tuple(cycle[k:] + cycle[:k])
        if len(ring) > 2 and id_key(ring[-1]) < id_key(ring[1]):
            ring = (ring[0],) + tuple(reversed(ring[1:]))
        findings.append(Finding(FindingKind.RING_DETECTED, ring, "closed loop without an open switch"))
    return findings


def check_short_lines(elements: ElementSet, min_length: float) -> list[Finding]:
    return [
        Finding(
            FindingKind.PATH_TOO_SHORT,
            (e.id,),
            f"line length {e.internal_length:.6f} m below {min_length:g} m",
        )
        for e in elements.values()
        if e.element_type in LINE_TYPES and e.internal_length < min_length
    ]


def check_paths(elements: ElementSet, paths: PathSet, cfg: PipelineConfig) -> list[Finding]:
    findings = []
    has_boards = any(e.element_type is ElementType.CONNECTION_BOARD for e in elements.values())
    for c, ps in paths.paths.items():
        if not ps:
            findings.append(Finding(FindingKind.CUSTOMER_WITHOUT_PATH, (c,), "no compatible path"))
    for p in paths.all_paths():
        ids = p.elements
        length = paths.lengths.get(p)
        if length is None:
            length = length_path(p, elements)
        if LENGTH in cfg.constraints and not length < cfg.L:
            findings.append(Finding(FindingKind.PATH_TOO_LONG, ids, f"length {length:.6f} m not below L={cfg.L:g}"))
        if cfg.D_p is not None and length > cfg.D_p:
            findings.append(Finding(FindingKind.PATH_TOO_LONG, ids, f"length {length:.6f} m above D_p={cfg.D_p:g}"))
        if cfg.N is not None and len(ids) > cfg.N:
            findings.append(Finding(FindingKind.PATH_TOO_LONG, ids, f"{len(ids)} elements above N={cfg.N}"))
        types = [elements[i].element_type for i in ids]
        if NO_REPEAT_TYPE in cfg.constraints:
            for a, b, ta, tb in zip(ids, ids[1:], types, types[1:]):
                if ta is tb:
                    findings.append(
                        Finding(FindingKind.CONSECUTIVE_SAME_TYPE, (a, b), f"two consecutive {ta.value} elements")
                    )
        bad = types.count(ElementType.CUSTOMER) != 1 or types.count(ElementType.TRANSFORMER) != 1
        if CARDINALITY in cfg.constraints and has_boards:
            bad = bad or types.count(ElementType.CONNECTION_BOARD) != 1
        if bad:
            findings.append(Finding(FindingKind.CARDINALITY_VIOLATION, ids, "wrong number of customer/board/transformer"))
    return findings


def check_active(paths: PathSet) -> list[Finding]:
    findings = []
    for c in paths.customers:
        active = paths.active_paths(c)
        if len(active) > 1:
            listing = "; ".join(",".join(p.elements) for p in active)
            findings.append(
                Finding(FindingKind.MULTIPLE_ACTIVE_PATHS, (c,), f"{len(active)} active paths: {listing}")
            )
    return findings


def check_capacity(paths: PathSet, limit: int) -> list[Finding]:
    supplied: dict[str, set[str]] = defaultdict(set)
    for c in paths.customers:
        for p in paths.active_paths(c):
            supplied[p.transformer].add(c)
    return [
        Finding(
            FindingKind.TRANSFORMER_OVER_CAPACITY,
            (t,),
            f"supplies {len(cs)} customers, capacity {limit}",
        )
        for t, cs in supplied.items()
        if len(cs) > limit
    ]


def sweep_switch_states(
    elements: ElementSet,
    paths: PathSet,
    limit: int = 20,
) -> list[SwitchAssignment]:
    """Active-path counts per customer under every open/close assignment of the switches."""
    switches = [e.id for e in elements.values() if e.element_type.is_switch]
    if len(switches) > limit:
        raise SwitchSpaceTooLarge(len(switches), limit)
    results = []
    for combo in itertools.product((SwitchStatus.CLOSE, SwitchStatus.OPEN), repeat=len(switches)):
        states = dict(zip(switches, combo))
        classified = classify(paths, elements, states)
        counts = {c: len(classified.active_paths(c)) for c in classified.customers}
        results.append(
            SwitchAssignment(tuple((s, st.value) for s, st in states.items()), counts)
        )
    return results


def check_unique_active(elements: ElementSet, paths: PathSet, limit: int = 20) -> list[Finding]:
    """Flag, per switch assignment, every customer whose active path count is not one."""
    findings = []
    for assignment in sweep_switch_states(elements, paths, limit):
        label = ", ".join(f"{s}={st}" for s, st in assignment.states) or "no switches"
        for c, n in assignment.active_counts.items():
            if n == 1:
                continue
            kind = FindingKind.MULTIPLE_ACTIVE_PATHS if n > 1 else FindingKind.CUSTOMER_WITHOUT_PATH
            findings.append(
                Finding(kind, (c,), f"{n} active paths with {label}", assignment=assignment.states)
            )
    return findings


def implicate_step(finding: Finding, traces: Sequence[TransformTrace]) -> str | None:
    subjects = set(finding.subjects)
    for trace in reversed(traces):
        if trace.touched() & subjects:
            return trace.step
    return None


def diagnose(
    elements: ElementSet,
    paths: PathSet,
    cfg: PipelineConfig,
    traces: Iterable[TransformTrace] = (),
) -> DiagnosticReport:
    traces = list(traces)
    if not paths.classified:
        paths = classify(paths, elements)
    graph = _hop_graph(elements, cfg)
    findings: list[Finding] = []
    findings += check_disconnected(elements, graph)
    findings += check_rings(elements, graph)
    findings += check_short_lines(elements, cfg.min_line_length)
    findings += check_paths(elements, paths, cfg)
    findings += check_active(paths)
    if cfg.M is not None:
        findings += check_capacity(paths, cfg.M)
    if cfg.sweep_switches:
        findings += check_unique_active(elements, paths, cfg.switch_limit)
    if traces:
        findings = [replace(f, step=implicate_step(f, traces)) for f in findings]
    findings.sort(key=Finding.sort_key)
    return DiagnosticReport(tuple(findings))
