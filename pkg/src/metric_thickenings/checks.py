from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a predicate that can explain itself.

    Truthiness follows ``ok``; ``failures`` carries witnesses (violating
    pairs, missing faces, ...) in the order they were found.
    """

    ok: bool
    failures: tuple[Any, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def first(self) -> Any:
        return self.failures[0] if self.failures else None

    @classmethod
    def from_failures(cls, failures) -> CheckResult:
        failures = tuple(failures)
        return cls(not failures, failures)
