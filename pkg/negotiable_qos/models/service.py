from dataclasses import dataclass, field
from typing import Mapping, Tuple

from ..utils import Number

SEQUENCE = "sequence"


@dataclass(frozen=True)
class Service:
    """A constituent service with its current QoS values in canonical units."""
    id: str
    qos: Mapping[str, Number] = field(default_factory=dict)

    def with_value(self, parameter_id: str, value: Number) -> "Service":
        qos = dict(self.qos)
        qos[parameter_id] = value
        return Service(self.id, qos)


@dataclass(frozen=True)
class Variant:
    """A service composition implementing the functional requirement.

    cached_qos holds the aggregate of the current service values and is only ever rebuilt
    by the estimator.
    """
    id: str
    services: Tuple[str, ...]
    pattern: str = SEQUENCE
    cached_qos: Mapping[str, Number] = field(default_factory=dict)

    def uses(self, service_id: str) -> bool:
        return service_id in self.services
