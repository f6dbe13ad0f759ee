"""Transformation steps that turn recorded elements into a connectable set.

Every step takes an :class:`ElementSet` and returns a new one together with a
:class:`TransformTrace` listing what it added, removed or replaced. Replaying
the traces on the input reproduces the output exactly.
"""
from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .config import (
    CONNECT_CUSTOMERS,
    HOP,
    LINK_BOARDS,
    LOCATE_SWITCHES,
    SNAP_OVERHEAD,
    STITCH_UNDERGROUND,
    PipelineConfig,
)
from .errors import NoAttachmentTarget
from .model import (
    Coord,
    Element,
    ElementSet,
    ElementType,
    SwitchStatus,
    closest,
    dist,
    id_key,
    point_dist,
)

log = logging.getLogger(__name__)

INSERT = "insert"


@dataclass(frozen=True)
class TraceEvent:
    action: str  # "added" | "removed" | "replaced"
    element_id: str
    element: Element | None = None
    related: tuple[str, ...] = ()


@dataclass(frozen=True)
class TransformTrace:
    step: str
    events: tuple[TraceEvent, ...] = ()

    def touched(self) -> set[str]:
        ids = set()
        for ev in self.events:
            ids.add(ev.element_id)
            ids.update(ev.related)
        return ids

    def count(self, action: str) -> int:
        return sum(1 for ev in self.events if ev.action == action)


def replay(elements: ElementSet, traces: Iterable[TransformTrace]) -> ElementSet:
    items = dict(elements.items())
    for trace in traces:
        for ev in trace.events:
            if ev.action == "removed":
                items.pop(ev.element_id, None)
            else:
                items[ev.element_id] = ev.element
    return ElementSet(items.values())


def _apply(elements: ElementSet, step: str, events: list[TraceEvent]) -> tuple[ElementSet, TransformTrace]:
    trace = TransformTrace(step, tuple(events))
    return replay(elements, [trace]), trace


def _fresh_id(base: str, taken: set[str]) -> str:
    candidate = base
    k = 2
    while candidate in taken:
        candidate = f"{base}_{k}"
        k += 1
    taken.add(candidate)
    return candidate


def _of_type(elements: Mapping[str, Element], t: ElementType) -> list[Element]:
    return [e for e in elements.values() if e.element_type is t]


def insert_elements(elements: ElementSet, new: Sequence[Element]) -> tuple[ElementSet, TransformTrace]:
    events = [
        TraceEvent("replaced" if e.id in elements else "added", e.id, e)
        for e in new
    ]
    return _apply(elements, INSERT, events)


def snap_overhead(elements: ElementSet, d_oh: float) -> tuple[ElementSet, TransformTrace]:
    """Extend overhead extremities onto the nearest extremity of another overhead line.

    Lines are processed in id order against the current state, so once one
    side of a gap is extended the other side sees distance zero and stays put.
    """
    current = {e.id: e for e in _of_type(elements, ElementType.OVERHEAD)}
    events = []
    for eid in sorted(current, key=id_key):
        line = current[eid]
        coords = list(line.coords)
        extended: dict[int, Coord] = {}
        related = []
        for end in (0, -1):
            p = coords[end]
            best = None
            for other in sorted(current.values(), key=lambda o: id_key(o.id)):
                if other.id == eid:
                    continue
                for q in other.extremities:
                    key = (point_dist(p, q), id_key(other.id))
                    if best is None or key < best[0]:
                        best = (key, q, other.id)
            if best is not None and 0 < best[0][0] < d_oh:
                extended[end] = best[1]
                related.append(best[2])
        if not extended:
            continue
        if 0 in extended:
            coords.insert(0, extended[0])
        if -1 in extended:
            coords.append(extended[-1])
        new = Element(eid, ElementType.OVERHEAD, tuple(coords))
        current[eid] = new
        events.append(TraceEvent("replaced", eid, new, tuple(related)))
    return _apply(elements, SNAP_OVERHEAD, events)


def stitch_underground_to_cabinets(elements: ElementSet, d_cab: float) -> tuple[ElementSet, TransformTrace]:
    """Keep underground lines whose two ends sit near two distinct cabinets.

    A kept line gains the cabinet coordinates at both ends; every other
    underground line is dropped, since the underground subset is replaced.
    """
    cabinets = _of_type(elements, ElementType.CABINET)
    events = []
    for line in _of_type(elements, ElementType.UNDERGROUND):
        if not cabinets:
            events.append(TraceEvent("removed", line.id))
            continue
        first, last = line.coords[0], line.coords[-1]
        n = closest(first, cabinets)
        m = closest(last, cabinets)
        related = (n.id, m.id)
        d_first = point_dist(first, n.coords[0])
        d_last = point_dist(last, m.coords[0])
        if d_first < d_cab and d_last < d_cab and n.id != m.id:
            coords = list(line.coords)
            if coords[0] != n.coords[0]:
                coords.insert(0, n.coords[0])
            if coords[-1] != m.coords[0]:
                coords.append(m.coords[0])
            if tuple(coords) != line.coords:
                new = Element(line.id, ElementType.UNDERGROUND, tuple(coords))
                events.append(TraceEvent("replaced", line.id, new, related))
        else:
            events.append(TraceEvent("removed", line.id, None, related))
    return _apply(elements, STITCH_UNDERGROUND, events)


def link_boards_to_poles(elements: ElementSet, d_cb: float) -> tuple[ElementSet, TransformTrace]:
    poles = _of_type(elements, ElementType.POLE)
    taken = set(elements)
    events = []
    if poles:
        for board in _of_type(elements, ElementType.CONNECTION_BOARD):
            pole = closest(board, poles)
            if dist(board, pole) < d_cb:
                new = Element(
                    _fresh_id(f"cb_{board.id}", taken),
                    ElementType.OVERHEAD,
                    (board.coords[0], pole.coords[0]),
                )
                events.append(TraceEvent("added", new.id, new, (board.id, pole.id)))
    return _apply(elements, LINK_BOARDS, events)


def connect_customers(elements: ElementSet) -> tuple[ElementSet, TransformTrace]:
    """Give every customer one line: underground to a cabinet if strictly nearer, else overhead to a pole."""
    customers = _of_type(elements, ElementType.CUSTOMER)
    cabinets = _of_type(elements, ElementType.CABINET)
    poles = _of_type(elements, ElementType.POLE)
    if customers and not cabinets and not poles:
        raise NoAttachmentTarget("connect_customers needs at least one cabinet or pole")
    taken = set(elements)
    events = []
    for c in customers:
        cab = closest(c, cabinets) if cabinets else None
        pole = closest(c, poles) if poles else None
        if cab is not None and (pole is None or dist(c, cab) < dist(c, pole)):
            target, kind = cab, ElementType.UNDERGROUND
        else:
            target, kind = pole, ElementType.OVERHEAD
        new = Element(_fresh_id(f"cus_{c.id}", taken), kind, (c.coords[0], target.coords[0]))
        events.append(TraceEvent("added", new.id, new, (c.id, target.id)))
    return _apply(elements, CONNECT_CUSTOMERS, events)


def _midpoint(a: Element, b: Element) -> Coord:
    best = None
    for p in a.coords:
        for q in b.coords:
            d = point_dist(p, q)
            if best is None or d < best[0]:
                best = (d, p, q)
    _, p, q = best
    return ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)


def locate_switches(
    elements: ElementSet,
    adjacency: Mapping[str, Sequence[str]],
) -> tuple[ElementSet, ElementSet, TransformTrace]:
    """Place open switches so no element is reachable along two routes.

    Feeder trees grow outward from every transformer in lockstep, one hop
    per round, visiting neighbours in id order. An edge that reaches an
    already claimed element closes a ring, so an open switch goes at the
    midpoint between the two elements. Entering a cabinet places a closed
    switch on it. Elements that no transformer reaches are then traversed
    from their smallest id. Existing open switches are never expanded.
    Returns the open switches, the closed switches and the trace; the caller
    merges them into the element set.
    """
    graph = {eid: [v for v in adjacency.get(eid, ()) if v in elements] for eid in elements}
    occupied = {e.coords[0] for e in elements.values() if e.element_type.is_switch}
    taken = set(elements)
    owner: dict[str, str] = {}
    parent: dict[str, str] = {}
    handled: set[frozenset[str]] = set()
    opens: list[Element] = []
    closes: list[Element] = []
    events: list[TraceEvent] = []
    counter = [0]

    def add_open(u: str, v: str) -> None:
        at = _midpoint(elements[u], elements[v])
        if at in occupied:
            return
        occupied.add(at)
        counter[0] += 1
        sw = Element(_fresh_id(f"os{counter[0]}", taken), ElementType.OPEN_SWITCH, (at,), SwitchStatus.OPEN)
        opens.append(sw)
        events.append(TraceEvent("added", sw.id, sw, (u, v)))

    def add_close(cabinet: str) -> None:
        at = elements[cabinet].coords[0]
        if at in occupied:
            return
        occupied.add(at)
        sw = Element(_fresh_id(f"cs_{cabinet}", taken), ElementType.CLOSE_SWITCH, (at,), SwitchStatus.CLOSE)
        closes.append(sw)
        events.append(TraceEvent("added", sw.id, sw, (cabinet,)))

    def grow(frontier: list[str]) -> None:
        while frontier:
            nxt = []
            for u in frontier:
                e = elements[u]
                if e.is_open and parent.get(u) is not None:
                    continue
                for v in graph[u]:
                    edge = frozenset((u, v))
                    if edge in handled:
                        continue
                    handled.add(edge)
                    if v in owner:
                        if not elements[v].is_open:
                            add_open(u, v)
                        continue
                    owner[v] = owner[u]
                    parent[v] = u
                    nxt.append(v)
                    if elements[v].element_type is ElementType.CABINET:
                        add_close(v)
            frontier = nxt

    roots = [e.id for e in elements.values() if e.element_type is ElementType.TRANSFORMER]
    for r in roots:
        owner[r] = r
    grow(roots)
    for eid in elements:
        if eid not in owner:
            owner[eid] = eid
            grow([eid])
    trace = TransformTrace(LOCATE_SWITCHES, tuple(events))
    return ElementSet(opens), ElementSet(closes), trace


def _adjacency_for(elements: ElementSet, cfg: PipelineConfig) -> dict[str, list[str]]:
    from .paths import Constraints, Network

    cons = Constraints(names=(HOP,), R=cfg.R, hop_rule=cfg.hop_rule)
    return Network(elements, cons).adjacency()


def apply_pipeline(elements: ElementSet, cfg: PipelineConfig) -> tuple[ElementSet, list[TransformTrace]]:
    """Run declared insertions, then every enabled step in configured order."""
    traces: list[TransformTrace] = []
    current = elements
    if cfg.insert:
        current, trace = insert_elements(current, cfg.insert)
        traces.append(trace)
    for step in cfg.steps:
        if step == SNAP_OVERHEAD:
            current, trace = snap_overhead(current, cfg.D_oh)
        elif step == STITCH_UNDERGROUND:
            current, trace = stitch_underground_to_cabinets(current, cfg.D_cab)
        elif step == LINK_BOARDS:
            current, trace = link_boards_to_poles(current, cfg.D_cb)
        elif step == CONNECT_CUSTOMERS:
            current, trace = connect_customers(current)
        elif step == LOCATE_SWITCHES:
            opens, closes, trace = locate_switches(current, _adjacency_for(current, cfg))
            current = current.with_elements(list(opens.values()) + list(closes.values()))
        traces.append(trace)
        log.info(
            "%s: +%d -%d ~%d",
            step,
            trace.count("added"),
            trace.count("removed"),
            trace.count("replaced"),
        )
    return current, traces
