"""Counting, enumerating and classifying customer-to-transformer paths.

Two engines produce the same :class:`PathSet`:

* :func:`enumerate_filtered` materializes every hypothetical path (customer,
  any ordered selection of intermediate elements, transformer) and excludes
  them one constraint at a time, recording the survivors after each stage.
* :func:`enumerate_eps` grows paths depth-first from each customer and only
  ever extends a prefix that can still satisfy every constraint.

The first is an oracle for the second and is only practical on small sets.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .config import (
    CARDINALITY,
    CLOSEST_LINE,
    HOP,
    LENGTH,
    MAX_DISTANCE,
    MAX_ELEMENTS,
    NO_REPEAT_TYPE,
    PipelineConfig,
)
from .errors import EnumerationCapExceeded, NotACustomer
from .model import (
    LINE_TYPES,
    Element,
    ElementSet,
    ElementType,
    Path,
    SwitchStatus,
    closest,
    coords_dist,
    dist,
    id_key,
    length_path,
)

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class Constraints:
    names: tuple[str, ...]
    R: float = 20.0
    L: float = 400.0
    N: int | None = None
    D_p: float | None = None
    M: int | None = None
    hop_rule: str = "nearest"

    @classmethod
    def from_config(cls, cfg: PipelineConfig) -> "Constraints":
        return cls(
            names=cfg.constraints,
            R=cfg.R,
            L=cfg.L,
            N=cfg.N,
            D_p=cfg.D_p,
            M=cfg.M,
            hop_rule=cfg.hop_rule,
        )

    def __contains__(self, name: str) -> bool:
        return name in self.names


@dataclass(frozen=True)
class PathSet:
    """Paths keyed by customer id; ``active`` is ``None`` until :func:`classify` runs."""

    paths: Mapping[str, tuple[Path, ...]]
    engine: str
    stages: tuple[tuple[str, int], ...] = ()
    active: frozenset[Path] | None = None
    lengths: Mapping[Path, float] = field(default_factory=dict)

    @property
    def customers(self) -> tuple[str, ...]:
        return tuple(self.paths)

    def all_paths(self) -> list[Path]:
        return [p for ps in self.paths.values() for p in ps]

    def canonical(self) -> frozenset[tuple[str, ...]]:
        return frozenset(p.elements for p in self.all_paths())

    @property
    def classified(self) -> bool:
        return self.active is not None

    def is_active(self, p: Path) -> bool:
        if self.active is None:
            raise ValueError("path set has not been classified")
        return p in self.active

    def active_paths(self, customer: str) -> list[Path]:
        return [p for p in self.paths.get(customer, ()) if self.is_active(p)]

    def backup_paths(self, customer: str) -> list[Path]:
        return [p for p in self.paths.get(customer, ()) if not self.is_active(p)]

    def __len__(self) -> int:
        return sum(len(ps) for ps in self.paths.values())


def hypothetical_count(E: int, C: int, T: int) -> int:
    """Number of duplicate-free customer-to-transformer sequences over E elements.

    Sums, over every count ``i`` of intermediate elements, C * P(R, i) * T
    with R = E - C - T. Python integers are unbounded, so the value is exact.
    """
    if C < 1 or T < 1:
        raise ValueError("need at least one customer and one transformer")
    rest = E - C - T
    if rest < 0:
        raise ValueError(f"E={E} is smaller than C + T = {C + T}")
    return sum(C * math.perm(rest, i) * T for i in range(rest + 1))


def _sort_paths(paths: Iterable[Path]) -> tuple[Path, ...]:
    return tuple(sorted(paths, key=lambda p: tuple(id_key(i) for i in p.elements)))


def _customers(elements: ElementSet) -> list[Element]:
    return [e for e in elements.values() if e.element_type is ElementType.CUSTOMER]


def _line_like(elements: ElementSet) -> list[Element]:
    return [e for e in elements.values() if e.element_type in LINE_TYPES]


def _has_boards(elements: ElementSet) -> bool:
    return any(e.element_type is ElementType.CONNECTION_BOARD for e in elements.values())


def link_rank_key(e: Element) -> tuple:
    # co-located compact devices win a distance tie over the lines meeting there
    return (len(e.coords), id_key(e.id))


def nearest_link_distances(elements: ElementSet) -> dict[frozenset[str], float]:
    """Undirected links: every extremity connects to its nearest non-customer element.

    A link's length is the distance from the extremity that created it (the
    shorter one if both ends picked each other), not the elements' overall
    minimum distance: a long line must not reach a far element through its
    near end. Straightforward reference version built on the model
    primitives; the engine computes the same relation through
    :mod:`gridtrace.kernels`.
    """
    targets = [e for e in elements.values() if e.element_type is not ElementType.CUSTOMER]
    links: dict[frozenset[str], float] = {}
    for a in elements.values():
        for c in a.extremities:
            best = None
            best_key = None
            for b in targets:
                if b.id == a.id:
                    continue
                key = (coords_dist((c,), b.coords), link_rank_key(b))
                if best_key is None or key < best_key:
                    best, best_key = b, key
            if best is not None:
                pair = frozenset((a.id, best.id))
                links[pair] = min(links.get(pair, math.inf), best_key[0])
    return links


def nearest_links(elements: ElementSet) -> frozenset[frozenset[str]]:
    return frozenset(nearest_link_distances(elements))


class Network:
    """Index arrays for one element set under one set of constraints."""

    def __init__(self, elements: ElementSet, cons: Constraints) -> None:
        self.elements = elements
        self.cons = cons
        self.ids = list(elements)
        self.index = {eid: i for i, eid in enumerate(self.ids)}
        elems = elements.elements()
        n = len(elems)
        counts = [len(e.coords) for e in elems]
        self.offsets = np.zeros(n + 1, dtype=np.int64)
        self.offsets[1:] = np.cumsum(counts)
        self.xy = np.array([c for e in elems for c in e.coords], dtype=np.float64).reshape(-1, 2)
        self.dmat = kernels.min_dist_matrix(self.xy, self.offsets)
        self.internal = np.array([e.internal_length for e in elems], dtype=np.float64)
        types = [e.element_type for e in elems]
        codes = {t: k for k, t in enumerate(ElementType)}
        self.tcode = np.array([codes[t] for t in types], dtype=np.int64)
        self.is_customer = np.array([t is ElementType.CUSTOMER for t in types], dtype=np.uint8)
        self.is_transformer = np.array([t is ElementType.TRANSFORMER for t in types], dtype=np.uint8)
        self.is_board = np.array([t is ElementType.CONNECTION_BOARD for t in types], dtype=np.uint8)
        self.neighbors = self._neighbors()
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        self.indptr[1:] = np.cumsum([len(nb) for nb in self.neighbors])
        self.indices = np.array([v for nb in self.neighbors for v in nb], dtype=np.int64)

    def link_pairs(self) -> dict[tuple[int, int], float]:
        """Index pairs of :func:`nearest_link_distances`, with the same lengths."""
        elems = self.elements.elements()
        n = len(elems)
        if n == 0:
            return {}
        query, owner = [], []
        for i, e in enumerate(elems):
            for c in e.extremities:
                query.append(c)
                owner.append(i)
        order = sorted(range(n), key=lambda i: link_rank_key(elems[i]))
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.arange(n)
        candidate = 1 - self.is_customer
        near = kernels.nearest_owner(
            np.array(query, dtype=np.float64).reshape(-1, 2),
            np.array(owner, dtype=np.int64),
            self.xy,
            self.offsets,
            candidate,
            rank,
        )
        pairs: dict[tuple[int, int], float] = {}
        for (qx, qy), a, b in zip(query, owner, near):
            if b < 0:
                continue
            b = int(b)
            # same arithmetic as the reference relation, so R comparisons agree exactly
            d = coords_dist(((qx, qy),), elems[b].coords)
            key = (min(a, b), max(a, b))
            pairs[key] = min(pairs.get(key, math.inf), d)
        return pairs

    def _neighbors(self) -> list[list[int]]:
        n = len(self.ids)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        if HOP not in self.cons:
            for u in range(n):
                nbrs[u] = {v for v in range(n) if v != u and not self.is_customer[v]}
        elif self.cons.hop_rule == "radius":
            for u in range(n):
                nbrs[u] = {
                    v for v in range(n)
                    if v != u and not self.is_customer[v] and self.dmat[u, v] < self.cons.R
                }
        else:
            for (a, b), d in self.link_pairs().items():
                if d < self.cons.R:
                    if not self.is_customer[b]:
                        nbrs[a].add(b)
                    if not self.is_customer[a]:
                        nbrs[b].add(a)
        return [sorted(s) for s in nbrs]

    def adjacency(self) -> dict[str, list[str]]:
        """Undirected hop graph as id lists (customers included as leaves)."""
        graph: dict[str, set[str]] = {eid: set() for eid in self.ids}
        for u, nb in enumerate(self.neighbors):
            for v in nb:
                graph[self.ids[u]].add(self.ids[v])
                graph[self.ids[v]].add(self.ids[u])
        return {k: sorted(v, key=id_key) for k, v in graph.items()}

    def first_hops(self, customer: str) -> list[int]:
        u = self.index[customer]
        cands = list(self.neighbors[u])
        if CLOSEST_LINE in self.cons:
            lines = _line_like(self.elements)
            if not lines:
                return []
            target = self.index[closest(self.elements[customer], lines).id]
            cands = [target] if (HOP not in self.cons or target in cands) else []
        return cands


def enumerate_eps(
    elements: ElementSet,
    cons: Constraints,
    network: Network | None = None,
) -> PathSet:
    """Grow every customer's compatible paths depth-first."""
    net = network or Network(elements, cons)
    limit_l = cons.L if LENGTH in cons else math.inf
    limit_d = cons.D_p if MAX_DISTANCE in cons and cons.D_p is not None else math.inf
    limit_n = cons.N if MAX_ELEMENTS in cons and cons.N is not None else len(net.ids) + 1
    use_boards = CARDINALITY in cons and _has_boards(elements)
    result: dict[str, tuple[Path, ...]] = {}
    lengths: dict[Path, float] = {}
    for c in _customers(elements):
        start = net.index[c.id]
        raw = kernels.expand_paths(
            start,
            np.array(net.first_hops(c.id), dtype=np.int64),
            net.indptr,
            net.indices,
            net.dmat,
            net.internal,
            net.is_transformer,
            net.is_customer,
            net.tcode,
            net.is_board,
            float(limit_l),
            float(limit_d),
            int(limit_n),
            NO_REPEAT_TYPE in cons,
            use_boards,
        )
        found = []
        for seq in raw:
            if use_boards and sum(int(net.is_board[i]) for i in seq) != 1:
                continue
            p = Path(tuple(net.ids[i] for i in seq))
            found.append(p)
            lengths[p] = length_path(p, elements)
        result[c.id] = _sort_paths(found)
    log.debug("eps backend=%s paths=%d", kernels.BACKEND, sum(len(v) for v in result.values()))
    return PathSet(paths=result, engine="eps", lengths=lengths)


class _Predicates:
    """Per-path checks for the filtering engine, written directly against the model."""

    def __init__(self, elements: ElementSet, cons: Constraints) -> None:
        self.elements = elements
        self.cons = cons
        self._dist: dict[tuple[str, str], float] = {}
        self._links = nearest_link_distances(elements) if cons.hop_rule == "nearest" else None
        lines = _line_like(elements)
        self._closest_line = {
            c.id: (closest(c, lines).id if lines else None) for c in _customers(elements)
        }
        self._boards = _has_boards(elements)

    def d(self, a: str, b: str) -> float:
        key = (a, b)
        if key not in self._dist:
            self._dist[key] = dist(self.elements[a], self.elements[b])
        return self._dist[key]

    def closest_line(self, h: tuple[str, ...]) -> bool:
        return self._closest_line.get(h[0]) == h[1]

    def hop(self, h: tuple[str, ...]) -> bool:
        for a, b in zip(h, h[1:]):
            if not self.d(a, b) < self.cons.R:
                return False
            if self._links is not None and not self._links.get(frozenset((a, b)), math.inf) < self.cons.R:
                return False
        return True

    def length(self, h: tuple[str, ...]) -> bool:
        return length_path(h, self.elements) < self.cons.L

    def max_elements(self, h: tuple[str, ...]) -> bool:
        return len(h) <= self.cons.N

    def max_distance(self, h: tuple[str, ...]) -> bool:
        return length_path(h, self.elements) <= self.cons.D_p

    def no_repeat_type(self, h: tuple[str, ...]) -> bool:
        types = [self.elements[i].element_type for i in h]
        return all(a is not b for a, b in zip(types, types[1:]))

    def cardinality(self, h: tuple[str, ...]) -> bool:
        types = [self.elements[i].element_type for i in h]
        ok = types.count(ElementType.CUSTOMER) == 1 and types.count(ElementType.TRANSFORMER) == 1
        if self._boards:
            ok = ok and types.count(ElementType.CONNECTION_BOARD) == 1
        return ok

    def ordered(self) -> list[tuple[str, callable]]:
        return [(name, getattr(self, name)) for name in self.cons.names]


def raw_count(elements: ElementSet) -> int:
    types = [e.element_type for e in elements.values()]
    C = types.count(ElementType.CUSTOMER)
    T = types.count(ElementType.TRANSFORMER)
    if C == 0 or T == 0:
        return 0
    return hypothetical_count(len(types), C, T)


def enumerate_filtered(
    elements: ElementSet,
    cons: Constraints,
    cap: int = DEFAULT_CAP,
) -> PathSet:
    """Generate all hypothetical paths, then exclude them one constraint at a time."""
    total = raw_count(elements)
    if total > cap:
        raise EnumerationCapExceeded(total, cap)
    customers = [e.id for e in _customers(elements)]
    transformers = [e.id for e in elements.values() if e.element_type is ElementType.TRANSFORMER]
    middle = [
        e.id
        for e in elements.values()
        if e.element_type not in (ElementType.CUSTOMER, ElementType.TRANSFORMER)
    ]
    checks = _Predicates(elements, cons).ordered()
    passed = [0] * (len(checks) + 1)
    survivors: dict[str, list[Path]] = {c: [] for c in customers}
    for c in customers:
        for k in range(len(middle) + 1):
            for mid in itertools.permutations(middle, k):
                for t in transformers:
                    h = (c, *mid, t)
                    passed[0] += 1
                    depth = 0
                    for _, check in checks:
                        if not check(h):
                            break
                        depth += 1
                        passed[depth] += 1
                    if depth == len(checks):
                        survivors[c].append(Path(h))
    stages = (("hypothetical", passed[0]),) + tuple(
        (name, passed[i + 1]) for i, (name, _) in enumerate(checks)
    )
    assert passed[0] == total
    lengths = {p: length_path(p, elements) for ps in survivors.values() for p in ps}
    return PathSet(
        paths={c: _sort_paths(ps) for c, ps in survivors.items()},
        engine="filtered",
        stages=stages,
        lengths=lengths,
    )


def path_is_active(p: Path, elements: ElementSet, statuses: Mapping[str, SwitchStatus] | None = None) -> bool:
    for eid in p.elements:
        e = elements[eid]
        if not e.element_type.is_switch:
            continue
        status = statuses.get(eid, e.status) if statuses else e.status
        if status is SwitchStatus.OPEN:
            return False
    return True


def classify(
    paths: PathSet,
    elements: ElementSet,
    statuses: Mapping[str, SwitchStatus] | None = None,
) -> PathSet:
    """Flag each path active (no open switch on it) or backup.

    ``statuses`` overrides the recorded status of individual switches, which
    is how alternative switch configurations are evaluated.
    """
    active = frozenset(
        p for p in paths.all_paths() if path_is_active(p, elements, statuses)
    )
    return PathSet(
        paths=paths.paths,
        engine=paths.engine,
        stages=paths.stages,
        active=active,
        lengths=paths.lengths,
    )


def paths_for_customer(paths: PathSet, c: str, elements: ElementSet | None = None) -> list[Path]:
    if elements is not None:
        if c not in elements or elements[c].element_type is not ElementType.CUSTOMER:
            raise NotACustomer(f"{c!r} is not a customer")
    elif c not in paths.paths:
        raise NotACustomer(f"{c!r} is not a customer of this path set")
    return [p for p in paths.paths.get(c, ()) if p.elements[0] == c]


def enumerate_paths(elements: ElementSet, cfg: PipelineConfig, oracle: bool = False) -> PathSet:
    cons = Constraints.from_config(cfg)
    if oracle:
        return enumerate_filtered(elements, cons, cap=cfg.cap)
    return enumerate_eps(elements, cons)
