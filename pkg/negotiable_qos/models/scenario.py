"""
Simulated service behaviors, scripted scenario events and the report they produce.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import InvalidModel
from ..utils import Number


@dataclass
class ServiceBehavior:
    """State-machine QoS evolution of one service parameter.

    Without a transition matrix the states are visited in list order, one state every `period`
    requests. With a matrix, each period boundary makes one seeded draw from the current row.
    """
    service_id: str
    parameter_id: str
    states: Sequence[Number]
    period: int = 5
    matrix: Optional[Sequence[Sequence[float]]] = None
    seed: Optional[int] = None
    current_state: int = 0

    def __post_init__(self):
        if not self.states:
            raise InvalidModel(f"behavior for {self.service_id}/{self.parameter_id} has no states")
        if self.period < 1:
            raise InvalidModel(f"behavior for {self.service_id} needs a period >= 1")
        if self.matrix is not None:
            rows = np.asarray(self.matrix, dtype=float)
            if rows.shape != (len(self.states), len(self.states)):
                raise InvalidModel(f"transition matrix for {self.service_id} must be square over its states")
            if not np.allclose(rows.sum(axis=1), 1.0) or (rows < 0).any():
                raise InvalidModel(f"transition matrix rows for {self.service_id} must be distributions")
        self._rng = np.random.default_rng(self.seed)

    @property
    def stochastic(self) -> bool:
        return self.matrix is not None

    @property
    def current_value(self) -> Number:
        return self.states[self.current_state]

    def advance(self) -> None:
        if self.stochastic:
            self.current_state = int(self._rng.choice(len(self.states), p=self.matrix[self.current_state]))
        else:
            self.current_state = (self.current_state + 1) % len(self.states)

    def reseed(self, entropy) -> None:
        self._rng = np.random.default_rng(entropy)


@dataclass(frozen=True)
class IssueRequests:
    count: int
    user_ids: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SetServiceQoS:
    service_id: str
    parameter_id: str
    value: Number


@dataclass(frozen=True)
class AdvanceBehavior:
    service_id: str
    parameter_id: Optional[str] = None


ScenarioEvent = Union[IssueRequests, SetServiceQoS, AdvanceBehavior]


@dataclass
class Scenario:
    name: str
    events: List[ScenarioEvent] = field(default_factory=list)
    behaviors: List[ServiceBehavior] = field(default_factory=list)
    record_detector: bool = False
    goals: Dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class VariantSelection:
    variant_id: str
    qos: Mapping[str, Number]


@dataclass(frozen=True)
class ReportColumn:
    """Selections of the first request served at a given model version."""
    request_index: int
    model_version: int
    changes: Tuple[str, ...]
    selections: Mapping[str, VariantSelection]


@dataclass
class ScenarioReport:
    scenario: str
    users: List[str]
    baseline: Optional[ReportColumn] = None
    columns: List[ReportColumn] = field(default_factory=list)
    requests: int = 0
    triggers: int = 0
    reestimations: int = 0


@dataclass(frozen=True)
class BenchmarkReport:
    """total_ms is the wall time of the whole run; busy_ms sums the per-request latencies."""
    n_variants: int
    n_params: int
    n_requests: int
    issuers: int
    latencies_ms: Tuple[float, ...]
    mean_ms: float
    p99_ms: float
    max_ms: float
    total_ms: float
    busy_ms: float
