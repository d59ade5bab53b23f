from dataclasses import dataclass
from typing import Optional

from ..utils import Number


@dataclass(frozen=True)
class MonitoringSample:
    """One observed QoS value for one (service, parameter) stream."""
    service_id: str
    parameter_id: str
    value: Number
    seq: int

    @property
    def stream(self):
        return (self.service_id, self.parameter_id)


@dataclass(frozen=True)
class ReferenceStats:
    """Running average of the current regime. mean is None until the first sample."""
    mean: Optional[Number] = None
    count: int = 0
    last_seq: Optional[int] = None


@dataclass(frozen=True)
class DetectorTransition:
    service_id: str
    parameter_id: str
    seq: int
    value: Number
    mean_before: Optional[Number]
    mean_after: Number
    count_after: int
    triggered: bool
