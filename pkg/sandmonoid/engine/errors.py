"""
sandmonoid - ENGINE: Errors
Every failure raised by the library derives from SandpileError.

Errors carry a list of violations (one line each) so callers and the CLI
can print all of them, not just the first.
"""

from typing import List, Optional, Sequence, Union


class SandpileError(Exception):
    """Base class. Holds one or more human-readable violations."""

    def __init__(self, violations: Union[str, Sequence[str]]):
        if isinstance(violations, str):
            violations = [violations]
        self.violations: List[str] = list(violations)
        super().__init__("; ".join(self.violations))


class GraphValidationError(SandpileError):
    """MultiDigraph invariant failure (connectivity, sink reachability, indices)."""


class ConfigError(SandpileError):
    """Configuration has the wrong length, negative entries, or is not stable."""


class GrainOverflowError(SandpileError):
    """Checked 64-bit grain arithmetic overflowed during toppling."""


class SizeCapError(SandpileError):
    """Enumeration would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} is {size}, cap is {cap}")


class PreconditionError(SandpileError):
    """An operation was called outside its domain."""


class InvariantError(SandpileError):
    """A mathematical invariant failed. Always an engine bug."""


class FormatError(SandpileError):
    """Malformed graph / config / table text."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TableFormatError(FormatError):
    """Malformed Cayley table (dimensions, indices)."""


class SettingsError(SandpileError):
    """Unreadable or ill-typed settings."""


def check_invariant(condition: bool, message: str):
    """Raise InvariantError unless condition holds."""
    if not condition:
        raise InvariantError(message)
