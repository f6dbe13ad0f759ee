"""Element data model and the geometric primitives built on it.

Elements carry planar coordinates in meters. Every other module works with
:class:`ElementSet`, an immutable id-keyed mapping, and with the four
primitives defined here: :func:`subset`, :func:`dist`, :func:`closest` and
:func:`length_path`.
"""
from __future__ import annotations

import enum
import math
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Union

from .errors import (
    EmptyCandidateSet,
    InvalidElement,
    InvalidPath,
    UnknownElement,
)

Coord = tuple[float, float]


class ElementType(str, enum.Enum):
    CUSTOMER = "customer"
    TRANSFORMER = "transformer"
    LINE = "line"
    SWITCH = "switch"
    OPEN_SWITCH = "open_switch"
    CLOSE_SWITCH = "close_switch"
    CABINET = "cabinet"
    CONNECTION_BOARD = "connection_board"
    POLE = "pole"
    UNDERGROUND = "underground"
    OVERHEAD = "overhead"

    @classmethod
    def parse(cls, text: str) -> "ElementType":
        key = text.strip().lower().replace(" ", "_").replace("-", "_")
        return cls(key)

    @property
    def is_switch(self) -> bool:
        return self in SWITCH_TYPES

    @property
    def is_line(self) -> bool:
        return self in LINE_TYPES


class SwitchStatus(str, enum.Enum):
    OPEN = "open"
    CLOSE = "close"


SWITCH_TYPES = frozenset(
    {ElementType.SWITCH, ElementType.OPEN_SWITCH, ElementType.CLOSE_SWITCH}
)
LINE_TYPES = frozenset({ElementType.LINE, ElementType.UNDERGROUND, ElementType.OVERHEAD})

_IMPLIED_STATUS = {
    ElementType.OPEN_SWITCH: SwitchStatus.OPEN,
    ElementType.CLOSE_SWITCH: SwitchStatus.CLOSE,
}

_ID_CHUNK = re.compile(r"(\d+)")


def id_key(element_id: str) -> tuple:
    """Natural sort key, so that ``e2`` orders before ``e10``."""
    parts = _ID_CHUNK.split(element_id)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p)


@dataclass(frozen=True)
class Element:
    id: str
    element_type: ElementType
    coords: tuple[Coord, ...]
    status: SwitchStatus | None = None

    def __post_init__(self) -> None:
        etype = self.element_type
        if not isinstance(etype, ElementType):
            etype = ElementType.parse(str(etype))
            object.__setattr__(self, "element_type", etype)
        coords = tuple((float(x), float(y)) for x, y in self.coords)
        object.__setattr__(self, "coords", coords)
        if not self.id:
            raise InvalidElement("element id must be non-empty")
        if not coords:
            raise InvalidElement(f"{self.id}: coordinate list is empty")
        if not all(math.isfinite(v) for c in coords for v in c):
            raise InvalidElement(f"{self.id}: non-finite coordinate")
        if etype.is_line:
            if len(coords) < 2:
                raise InvalidElement(f"{self.id}: {etype.value} needs at least two coordinate pairs")
        elif len(coords) != 1:
            raise InvalidElement(f"{self.id}: {etype.value} takes exactly one coordinate pair")

        status = self.status
        if status is not None and not isinstance(status, SwitchStatus):
            status = SwitchStatus(str(status).strip().lower())
        if etype.is_switch:
            implied = _IMPLIED_STATUS.get(etype)
            if status is None:
                status = implied
            if status is None:
                raise InvalidElement(f"{self.id}: switch requires a status")
            if implied is not None and status is not implied:
                raise InvalidElement(f"{self.id}: {etype.value} cannot have status {status.value}")
        elif status is not None:
            raise InvalidElement(f"{self.id}: only switches carry a status")
        object.__setattr__(self, "status", status)

    @property
    def is_open(self) -> bool:
        return self.status is SwitchStatus.OPEN

    @property
    def internal_length(self) -> float:
        c = self.coords
        return sum(point_dist(c[i], c[i + 1]) for i in range(len(c) - 1))

    @property
    def extremities(self) -> tuple[Coord, ...]:
        if len(self.coords) == 1:
            return self.coords
        return (self.coords[0], self.coords[-1])


class ElementSet(Mapping[str, Element]):
    """Immutable mapping from id to :class:`Element`; iteration follows :func:`id_key`."""

    __slots__ = ("_items", "_order")

    def __init__(self, elements: Iterable[Element] = ()) -> None:
        items: dict[str, Element] = {}
        for e in elements:
            if e.id in items:
                from .errors import DuplicateId

                raise DuplicateId(f"duplicate element id {e.id!r}")
            items[e.id] = e
        self._order = tuple(sorted(items, key=id_key))
        self._items = {k: items[k] for k in self._order}

    def __getitem__(self, key: str) -> Element:
        try:
            return self._items[key]
        except KeyError:
            raise UnknownElement(f"unknown element {key!r}") from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, key: object) -> bool:
        return key in self._items

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ElementSet):
            return self._items == other._items
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._items.values()))

    def __repr__(self) -> str:
        return f"ElementSet({list(self._order)})"

    def elements(self) -> tuple[Element, ...]:
        return tuple(self._items.values())

    def with_elements(self, added: Iterable[Element] = (), removed: Iterable[str] = ()) -> "ElementSet":
        """Return a new set with ``removed`` ids dropped, then ``added`` elements upserted."""
        items = dict(self._items)
        for rid in removed:
            items.pop(rid, None)
        for e in added:
            items[e.id] = e
        return ElementSet(items.values())

    def types(self) -> set[ElementType]:
        return {e.element_type for e in self._items.values()}


@dataclass(frozen=True)
class Path:
    """Ordered, duplicate-free sequence of element ids."""

    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        ids = tuple(self.elements)
        object.__setattr__(self, "elements", ids)
        if len(set(ids)) != len(ids):
            raise InvalidPath(f"path repeats an element: {ids}")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def customer(self) -> str:
        return self.elements[0]

    @property
    def transformer(self) -> str:
        return self.elements[-1]

    def validate(self, elements: ElementSet) -> None:
        """Check the completed-path invariant: customer first, transformer last."""
        if len(self.elements) < 2:
            raise InvalidPath("a completed path has at least two elements")
        if elements[self.elements[0]].element_type is not ElementType.CUSTOMER:
            raise InvalidPath(f"path must start at a customer: {self.elements}")
        if elements[self.elements[-1]].element_type is not ElementType.TRANSFORMER:
            raise InvalidPath(f"path must end at a transformer: {self.elements}")


def subset(elements: ElementSet, t: ElementType | str) -> ElementSet:
    if not isinstance(t, ElementType):
        try:
            t = ElementType.parse(t)
        except ValueError:
            return ElementSet()
    return ElementSet(e for e in elements.values() if e.element_type is t)


def point_dist(a: Coord, b: Coord) -> float:
    # written out rather than math.hypot so the compiled kernels match bit for bit
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return math.sqrt(dx * dx + dy * dy)


def coords_dist(a: Iterable[Coord], b: Iterable[Coord]) -> float:
    b = tuple(b)
    return min(point_dist(p, q) for p in a for q in b)


def dist(a: Element, b: Element) -> float:
    """Minimum Euclidean distance over all pairs of stored coordinates."""
    return coords_dist(a.coords, b.coords)


def closest(e: Union[Element, Coord], candidates: Iterable[Element]) -> Element:
    """Nearest candidate to ``e``; equal distances resolve to the smallest id.

    ``e`` may also be a bare coordinate pair, which is how line extremities
    are matched against candidate sets.
    """
    coords = e.coords if isinstance(e, Element) else (e,)
    best: Element | None = None
    best_key = None
    for s in candidates:
        key = (coords_dist(coords, s.coords), id_key(s.id))
        if best_key is None or key < best_key:
            best, best_key = s, key
    if best is None:
        raise EmptyCandidateSet("closest() needs at least one candidate")
    return best


def length_path(p: Path | Iterable[str], elements: ElementSet) -> float:
    """Hop distances plus the internal polyline length of every element but the last."""
    ids = p.elements if isinstance(p, Path) else tuple(p)
    if len(ids) < 2:
        raise InvalidPath("length_path needs at least two elements")
    resolved = [elements[i] for i in ids]
    total = 0.0
    for a, b in zip(resolved, resolved[1:]):
        total += dist(a, b) + a.internal_length
    return total
