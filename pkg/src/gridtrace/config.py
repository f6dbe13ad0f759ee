"""Pipeline thresholds, enabled transformation steps and path constraints."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError, InvalidThreshold, MissingThreshold, UnknownStep
from .model import Element

SNAP_OVERHEAD = "snap_overhead"
STITCH_UNDERGROUND = "stitch_underground_to_cabinets"
LINK_BOARDS = "link_boards_to_poles"
CONNECT_CUSTOMERS = "connect_customers"
LOCATE_SWITCHES = "locate_switches"

DEFAULT_STEPS = (
    SNAP_OVERHEAD,
    STITCH_UNDERGROUND,
    LINK_BOARDS,
    CONNECT_CUSTOMERS,
    LOCATE_SWITCHES,
)

# per-path predicates, applied in the listed order by the filtering engine
CLOSEST_LINE = "closest_line"
HOP = "hop"
LENGTH = "length"
MAX_ELEMENTS = "max_elements"
MAX_DISTANCE = "max_distance"
NO_REPEAT_TYPE = "no_repeat_type"
CARDINALITY = "cardinality"

CONSTRAINT_NAMES = (
    CLOSEST_LINE,
    HOP,
    LENGTH,
    MAX_ELEMENTS,
    MAX_DISTANCE,
    NO_REPEAT_TYPE,
    CARDINALITY,
)
ACADEMIC_CONSTRAINTS = (CLOSEST_LINE, HOP, LENGTH)
CASE_STUDY_CONSTRAINTS = (CARDINALITY, NO_REPEAT_TYPE, HOP, MAX_ELEMENTS, MAX_DISTANCE)

HOP_RULES = ("nearest", "radius")


@dataclass(frozen=True)
class PipelineConfig:
    R: float = 20.0
    L: float = 400.0
    N: int | None = None
    D_p: float | None = None
    D_oh: float = 1.0
    D_cab: float = 2.0
    D_cb: float = 2.0
    M: int | None = None
    steps: tuple[str, ...] = DEFAULT_STEPS
    constraints: tuple[str, ...] = ACADEMIC_CONSTRAINTS
    hop_rule: str = "nearest"
    min_line_length: float = 0.1
    cap: int = 10**7
    switch_limit: int = 20
    sweep_switches: bool = False
    insert: tuple[Element, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "insert", tuple(self.insert))
        for name in ("R", "L", "D_p", "D_oh", "D_cab", "D_cb", "min_line_length"):
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)) or math.isnan(value):
                raise InvalidThreshold(f"{name} must be a number, got {value!r}")
            if value <= 0:
                raise InvalidThreshold(f"{name} must be > 0, got {value}")
        if self.N is not None and (not isinstance(self.N, int) or self.N < 2):
            raise InvalidThreshold(f"N must be an integer >= 2, got {self.N!r}")
        if self.M is not None and (not isinstance(self.M, int) or self.M < 1):
            raise InvalidThreshold(f"M must be an integer >= 1, got {self.M!r}")
        if self.cap < 1 or self.switch_limit < 0:
            raise InvalidThreshold("cap and switch_limit must be positive")
        for step in self.steps:
            if step not in DEFAULT_STEPS:
                raise UnknownStep(f"unknown transformation step {step!r}")
        if len(set(self.steps)) != len(self.steps):
            raise ConfigError("a step may appear only once")
        for name in self.constraints:
            if name not in CONSTRAINT_NAMES:
                raise ConfigError(f"unknown constraint {name!r}")
        if len(set(self.constraints)) != len(self.constraints):
            raise ConfigError("a constraint may appear only once")
        if self.hop_rule not in HOP_RULES:
            raise ConfigError(f"hop_rule must be one of {HOP_RULES}, got {self.hop_rule!r}")
        if MAX_ELEMENTS in self.constraints and self.N is None:
            raise MissingThreshold("constraint max_elements needs N")
        if MAX_DISTANCE in self.constraints and self.D_p is None:
            raise MissingThreshold("constraint max_distance needs D_p")

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))
