from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional


class Outcome(enum.Enum):
    VALID = "Valid"
    INVALID = "Invalid"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Conclusion:
    """A verdict on a goal formula.

    ``countermodel`` maps each column formula of row r0 to its truth value
    (``None`` when the solver left the cell unconstrained).  It is only set
    for Invalid outcomes.
    """

    outcome: Outcome
    countermodel: Optional[dict] = None
    source: str = ""
    elapsed_ms: float = 0.0
    detail: str = ""
    timings: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.outcome is Outcome.VALID

    @property
    def invalid(self) -> bool:
        return self.outcome is Outcome.INVALID

    @property
    def conclusive(self) -> bool:
        return self.outcome is not Outcome.INCONCLUSIVE
