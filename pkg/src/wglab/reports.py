from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Direction(str, Enum):
    UPPER_BOUND = "UPPER_BOUND"
    LOWER_BOUND = "LOWER_BOUND"
    ESTIMATE = "ESTIMATE"


@dataclass(frozen=True)
class BoundReport:
    """A bound or estimate compared against a spectral threshold.

    ``margin = value - threshold`` regardless of direction: a negative margin
    on an UPPER_BOUND certifies a state below the threshold, a positive margin
    on a LOWER_BOUND certifies there is none.  ``error`` is the numerical
    budget attached to ``value``.
    """

    name: str
    value: float
    direction: Direction
    threshold: float
    error: float = 0.0
    status: str = ""
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def margin(self) -> float:
        return self.value - self.threshold
