"""
Negotiable maintenance goals: the four statement forms and the quantities they carry.

Parsed statements hold parameter names and raw unit tokens; resolved statements reuse the same
classes with canonical parameter ids and quantities in each parameter's canonical unit.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from ..errors import DisjointnessViolation
from ..utils import format_number


@dataclass(frozen=True)
class Quantity:
    magnitude: Fraction
    unit: str = ""

    def __str__(self):
        text = format_number(self.magnitude)
        return f"{text} {self.unit}" if self.unit else text


@dataclass(frozen=True)
class HighPriority:
    params: Tuple[str, ...]


@dataclass(frozen=True)
class LessThan:
    params: Tuple[str, ...]
    value: Quantity


@dataclass(frozen=True)
class GreaterThan:
    params: Tuple[str, ...]
    value: Quantity


@dataclass(frozen=True)
class Conditional:
    """IF first_params UPGRADES_BY first_value THEN second_params DEGRADES_BY second_value.
    Percentages are plain numbers (20, not 0.20).
    """
    first_params: Tuple[str, ...]
    first_value: Fraction
    second_params: Tuple[str, ...]
    second_value: Fraction

    def __post_init__(self):
        shared = set(self.first_params) & set(self.second_params)
        if shared:
            raise DisjointnessViolation(shared)

    @property
    def params(self) -> Tuple[str, ...]:
        return self.first_params + self.second_params


GoalStatement = Union[HighPriority, LessThan, GreaterThan, Conditional]
ResolvedGoal = GoalStatement
