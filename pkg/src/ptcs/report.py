"""Structured result of a numerical check."""

from dataclasses import dataclass, field

__all__ = ["VerifyReport"]


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of one oracle/identity check.

    ``passed`` is always derived from max_deviation <= tolerance, never
    set independently.  ``details`` holds named scalars useful for
    diagnosis (worst index, companion-path values, flagged discrepancies).
    """

    check_name: str
    max_deviation: float
    tolerance: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.max_deviation <= self.tolerance

    def as_dict(self):
        return {
            "check_name": self.check_name,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": dict(self.details),
        }
