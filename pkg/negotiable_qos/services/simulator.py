"""
Scenario replay: simulated service behaviors and scripted third-party changes feed the change
detector, triggers re-estimate the model, and every request is dispatched for every user.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Tuple

from ..models.computational_model import ComputationalModel
from ..models.monitoring import MonitoringSample
from ..models.policy import SelectionPolicy
from ..models.scenario import (AdvanceBehavior, IssueRequests, ReportColumn, Scenario, ScenarioReport,
                               ServiceBehavior, SetServiceQoS, VariantSelection)
from ..models.trace import SelectionTrace
from ..utils import format_number
from .change_detector import DetectorBank
from .dispatcher import select
from .logger import Logger
from .model_loader import validate_scenario
from .policy_compiler import default_thresholds
from .qos_estimator import ModelStore


def step(behavior: ServiceBehavior, request_count: int, seq: Optional[int] = None) -> MonitoringSample:
    """Sample of a behavior at the given (1-based) request.

    The state advances when the request count crosses a multiple of the period, so with
    period 5 requests 1-5 see the first state and request 6 the second.
    """
    if request_count > 1 and (request_count - 1) % behavior.period == 0:
        behavior.advance()
    return MonitoringSample(behavior.service_id, behavior.parameter_id, behavior.current_value,
                            request_count if seq is None else seq)


@dataclass
class ScenarioResult:
    traces: List[SelectionTrace]
    report: ScenarioReport
    detector_records: List[Dict] = field(default_factory=list)
    final_model: Optional[ComputationalModel] = None


class ScenarioRunner:
    def __init__(self, model: ComputationalModel, policies: Mapping[str, SelectionPolicy],
                 scenario: Scenario, seed: int = 0):
        self.scenario = scenario
        self.seed = seed
        self.users = list(policies)
        validate_scenario(scenario, model, self.users)
        self.store = ModelStore(model)
        # Defaults are taken from the initial estimates once, at activation.
        self.policies = {user: default_thresholds(policy, model) for user, policy in policies.items()}
        self.detectors = DetectorBank(model.catalog, on_trigger=self._reestimate,
                                      record_transitions=scenario.record_detector)
        self.logger = Logger.get_instance()
        self.request_count = 0
        self.pending_changes: List[str] = []
        self.traces: List[SelectionTrace] = []
        self.report = ScenarioReport(scenario.name, self.users)

        for service in model.services.values():
            for parameter_id, value in service.qos.items():
                self.detectors.seed(service.id, parameter_id, value)
        # Behaviors are copied so replaying the same scenario object is reproducible.
        self.behaviors = [replace(b) for b in scenario.behaviors]
        for index, behavior in enumerate(self.behaviors):
            if behavior.stochastic:
                behavior.reseed([seed, index, behavior.seed or 0])
        self.detectors.transitions.clear()

    def _reestimate(self, sample: MonitoringSample) -> None:
        self.store.reestimate(sample.service_id, sample.parameter_id, sample.value)
        self.pending_changes.append(f"{sample.service_id}.{sample.parameter_id}={format_number(sample.value)}")

    def _sample(self, service_id: str, parameter_id: str, value) -> None:
        seq = self.detectors.next_seq(service_id, parameter_id)
        self.detectors.observe(MonitoringSample(service_id, parameter_id, value, seq))

    def _issue(self, event: IssueRequests) -> None:
        users = list(event.user_ids) or self.users
        for _ in range(event.count):
            self.request_count += 1
            for behavior in self.behaviors:
                sample = step(behavior, self.request_count,
                              self.detectors.next_seq(behavior.service_id, behavior.parameter_id))
                self.detectors.observe(sample)
            snapshot = self.store.snapshot()
            selections: Dict[str, VariantSelection] = {}
            for user in users:
                variant_id, trace = select(snapshot, self.policies[user], str(self.request_count))
                self.traces.append(trace)
                selections[user] = VariantSelection(variant_id, dict(snapshot.variants[variant_id].cached_qos))
            self._record(snapshot, selections)

    def _record(self, snapshot: ComputationalModel, selections: Dict[str, VariantSelection]) -> None:
        column = ReportColumn(self.request_count, snapshot.version, tuple(self.pending_changes), selections)
        if self.report.baseline is None:
            self.report.baseline = column
        elif self.pending_changes:
            self.report.columns.append(column)
        self.pending_changes = []

    def _advance(self, event: AdvanceBehavior) -> None:
        for behavior in self.behaviors:
            if behavior.service_id == event.service_id and event.parameter_id in (None, behavior.parameter_id):
                behavior.advance()

    def run(self) -> ScenarioResult:
        self.logger.log_action("SCENARIO_STARTED", f"{self.scenario.name} for users {', '.join(self.users)}")
        for event in self.scenario.events:
            if isinstance(event, IssueRequests):
                self._issue(event)
            elif isinstance(event, SetServiceQoS):
                self._sample(event.service_id, event.parameter_id, event.value)
            elif isinstance(event, AdvanceBehavior):
                self._advance(event)
        self.report.requests = self.request_count
        self.report.triggers = self.detectors.triggers
        self.report.reestimations = self.store.reestimations
        self.logger.log_action(
            "SCENARIO_FINISHED",
            f"{self.scenario.name}: {self.request_count} requests, {self.report.reestimations} re-estimations",
        )
        return ScenarioResult(self.traces, self.report, self._detector_records(), self.store.snapshot())

    def _detector_records(self) -> List[Dict]:
        return [
            {
                "type": "detector",
                "serviceId": t.service_id,
                "parameterId": t.parameter_id,
                "seq": t.seq,
                "value": format_number(t.value),
                "meanBefore": None if t.mean_before is None else format_number(t.mean_before),
                "meanAfter": format_number(t.mean_after),
                "count": t.count_after,
                "triggered": t.triggered,
            }
            for t in self.detectors.transitions
        ]


def run_scenario(model: ComputationalModel, policies: Mapping[str, SelectionPolicy], scenario: Scenario,
                 seed: int = 0) -> Tuple[List[SelectionTrace], ScenarioReport]:
    result = ScenarioRunner(model, policies, scenario, seed).run()
    return result.traces, result.report
