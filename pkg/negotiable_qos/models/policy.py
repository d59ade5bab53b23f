from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Mapping

from ..utils import Number, format_number


@dataclass(frozen=True)
class SelectionPolicy:
    """Per-user priorities and thresholds compiled from negotiable maintenance goals.

    Thresholds of negative parameters are upper bounds, of positive parameters lower bounds.
    explicit marks thresholds fixed by the user; defaulted ones are False.
    """
    user_id: str
    priorities: Mapping[str, Fraction] = field(default_factory=dict)
    thresholds: Mapping[str, Number] = field(default_factory=dict)
    explicit: Mapping[str, bool] = field(default_factory=dict)

    def with_changes(self, *, priorities=None, thresholds=None, explicit=None) -> "SelectionPolicy":
        return replace(
            self,
            priorities=dict(self.priorities if priorities is None else priorities),
            thresholds=dict(self.thresholds if thresholds is None else thresholds),
            explicit=dict(self.explicit if explicit is None else explicit),
        )

    @property
    def priority_sum(self) -> Fraction:
        return sum(self.priorities.values(), Fraction(0))

    def has_explicit_threshold(self, parameter_id: str) -> bool:
        return self.explicit.get(parameter_id, False) and parameter_id in self.thresholds

    def to_document(self) -> Dict[str, Any]:
        """Structured form used by the compile command and golden-file tests."""
        return {
            "user_id": self.user_id,
            "priorities": {k: format_number(v) for k, v in self.priorities.items()},
            "thresholds": {k: format_number(v) for k, v in self.thresholds.items()},
            "explicit": {k: bool(self.explicit.get(k, False)) for k in self.thresholds},
        }
