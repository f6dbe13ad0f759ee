"""Exception hierarchy. Each concrete error carries the CLI exit code it maps to."""
from __future__ import annotations


class GridTraceError(Exception):
    exit_code = 10


class InvalidElement(GridTraceError, ValueError):
    exit_code = 15


class InvalidPath(GridTraceError, ValueError):
    exit_code = 16


class UnknownElement(GridTraceError, KeyError):
    exit_code = 17

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown element"


class EmptyCandidateSet(GridTraceError, ValueError):
    exit_code = 18


class ParseError(GridTraceError, ValueError):
    exit_code = 11

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateId(ParseError):
    exit_code = 12


class UnknownType(ParseError):
    exit_code = 13


class MissingStatusOnSwitch(ParseError):
    exit_code = 14


class ConfigError(GridTraceError, ValueError):
    exit_code = 19


class InvalidThreshold(ConfigError):
    exit_code = 20


class UnknownKey(ConfigError):
    exit_code = 21


class MissingThreshold(ConfigError):
    exit_code = 22


class UnknownStep(ConfigError):
    exit_code = 23


class NoAttachmentTarget(GridTraceError):
    exit_code = 24


class EnumerationCapExceeded(GridTraceError):
    exit_code = 30

    def __init__(self, count: int, cap: int) -> None:
        self.count = count
        self.cap = cap
        super().__init__(f"{count} raw hypothetical paths exceed the enumeration cap of {cap}")


class SwitchSpaceTooLarge(GridTraceError):
    exit_code = 31

    def __init__(self, switches: int, limit: int) -> None:
        self.switches = switches
        self.limit = limit
        super().__init__(f"{switches} switches give 2**{switches} assignments (limit {limit} switches)")


class NotACustomer(GridTraceError, ValueError):
    exit_code = 32


class UnsupportedFormat(GridTraceError, ValueError):
    exit_code = 40


def all_error_types() -> list[type[GridTraceError]]:
    seen: list[type[GridTraceError]] = []
    stack = [GridTraceError]
    while stack:
        cls = stack.pop()
        seen.append(cls)
        stack.extend(cls.__subclasses__())
    return seen
