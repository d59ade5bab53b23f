from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Tuple

from ..utils import Number, fixed6


@dataclass(frozen=True)
class SelectionTrace:
    """Audit record of one dispatch. sigma entries are None where the threshold is zero."""
    request_id: str
    user_id: str
    model_version: int
    sigma: Mapping[str, Mapping[str, Optional[Number]]]
    excluded: Tuple[Tuple[str, str], ...]
    scores: Mapping[str, Number]
    tie_break_applied: bool
    selected: str

    def to_record(self) -> Dict[str, Any]:
        return {
            "type": "selection",
            "requestId": self.request_id,
            "userId": self.user_id,
            "modelVersion": self.model_version,
            "selected": self.selected,
            "excluded": [list(pair) for pair in self.excluded],
            "scores": {variant_id: fixed6(score) for variant_id, score in self.scores.items()},
            "tieBreakApplied": self.tie_break_applied,
        }
