"""
Loads model and scenario documents (YAML) into domain objects.

Model document:

    version: V0.2
    requirement: provide_driving_time
    parameters:
      - {id: response_time, name: Response time, polarity: negative, unit: s,
         units: {ms: 0.001, day: 86400}, aggregator: sum, change_rule: fluctuating}
    services:
      - {id: road_info, qos: {response_time: 2, cost: 10, accuracy: 9}}
    variants:
      - {id: V1, services: [road_info, estimate_time]}
    goals:                       # optional, user -> goal text
      high: Response time is high priority.
"""

from typing import Any, Dict, List, Optional, Tuple

import yaml

from ..errors import ConfigError, InvalidModel, ScenarioReferenceError
from ..models.computational_model import ComputationalModel
from ..models.parameter import Aggregator, ChangeRule, ParameterCatalog, Polarity, QoSParameter
from ..models.scenario import AdvanceBehavior, IssueRequests, Scenario, ServiceBehavior, SetServiceQoS
from ..models.service import SEQUENCE, Service, Variant
from ..utils import to_number
from .qos_estimator import build_model
from .transformation_manager import transformation_manager


def read_yaml(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError(f"File not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigError(f"Failed to parse {path}: {e}")
    if not isinstance(document, dict):
        raise ConfigError(f"{path} must be a YAML dictionary.")
    return document


def _enum(enum_cls, value, what: str):
    try:
        return enum_cls(str(value).lower())
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise InvalidModel(f"invalid {what} '{value}' (expected one of: {allowed})") from None


def _number(value, what: str):
    try:
        return to_number(value)
    except (ValueError, ZeroDivisionError):
        raise InvalidModel(f"{what} is not a number: {value!r}") from None


def parse_parameter(entry: Dict[str, Any]) -> QoSParameter:
    if "id" not in entry or "polarity" not in entry:
        raise InvalidModel(f"parameter entries need 'id' and 'polarity': {entry!r}")
    parameter_id = str(entry["id"])
    conversions = {str(token): _number(factor, f"conversion factor '{token}' of {parameter_id}")
                   for token, factor in (entry.get("units") or {}).items()}
    return QoSParameter(
        id=parameter_id,
        display_name=str(entry.get("name", parameter_id)),
        polarity=_enum(Polarity, entry["polarity"], "polarity"),
        canonical_unit=str(entry.get("unit", "") or ""),
        unit_conversions=conversions,
        aggregator=_enum(Aggregator, entry.get("aggregator", "sum"), "aggregator"),
        change_rule=_enum(ChangeRule, entry.get("change_rule", "stable"), "change rule"),
        aliases=tuple(str(a) for a in entry.get("aliases") or ()),
    )


def model_from_document(document: Dict[str, Any]) -> ComputationalModel:
    document = transformation_manager.apply_transformations(document)
    catalog = ParameterCatalog([parse_parameter(p) for p in document.get("parameters") or []])
    if not len(catalog):
        raise InvalidModel("model declares no parameters")
    services = []
    variants = []
    try:
        for entry in document.get("services") or []:
            service_id = str(entry["id"])
            qos = {str(k): _number(v, f"{service_id}.{k}") for k, v in (entry.get("qos") or {}).items()}
            services.append(Service(service_id, qos))
        for entry in document.get("variants") or []:
            variants.append(Variant(
                id=str(entry["id"]),
                services=tuple(str(s) for s in entry.get("services") or ()),
                pattern=str(entry.get("pattern", SEQUENCE)),
            ))
    except KeyError as e:
        raise InvalidModel(f"service and variant entries need an {e}") from None
    return build_model(str(document.get("requirement", "requirement")), catalog, services, variants)


def inline_goals(document: Dict[str, Any]) -> Dict[str, str]:
    goals = document.get("goals") or {}
    if not isinstance(goals, dict):
        raise ConfigError("'goals' must map user ids to goal text")
    return {str(user): str(text or "") for user, text in goals.items()}


def load_model(path: str) -> Tuple[ComputationalModel, Dict[str, str]]:
    """Returns the estimated model and any inline goals it carries."""
    document = read_yaml(path)
    return model_from_document(document), inline_goals(document)


def _behavior(entry: Dict[str, Any]) -> ServiceBehavior:
    try:
        return ServiceBehavior(
            service_id=str(entry["service"]),
            parameter_id=str(entry["parameter"]),
            states=[_number(s, "behavior state") for s in entry["states"]],
            period=int(entry.get("every", 5)),
            matrix=entry.get("matrix"),
            seed=entry.get("seed"),
            current_state=int(entry.get("initial_state", 0)),
        )
    except KeyError as e:
        raise InvalidModel(f"behavior entry is missing {e}: {entry!r}") from None


def _event(entry: Dict[str, Any]):
    if not isinstance(entry, dict) or len(entry) != 1:
        raise InvalidModel(f"each scenario event must have exactly one kind: {entry!r}")
    kind, body = next(iter(entry.items()))
    body = body or {}
    if kind == "issue_requests":
        users = body.get("users") or ()
        return IssueRequests(int(body.get("count", 1)), tuple(str(u) for u in users))
    try:
        if kind == "set_service_qos":
            return SetServiceQoS(str(body["service"]), str(body["parameter"]), _number(body["value"], "event value"))
        if kind == "advance_behavior":
            parameter = body.get("parameter")
            return AdvanceBehavior(str(body["service"]), str(parameter) if parameter else None)
    except KeyError as e:
        raise InvalidModel(f"'{kind}' event is missing {e}") from None
    raise InvalidModel(f"unknown scenario event '{kind}'")


def scenario_from_document(document: Dict[str, Any], name: Optional[str] = None) -> Scenario:
    record = document.get("record") or {}
    return Scenario(
        name=str(document.get("scenario", name or "scenario")),
        events=[_event(e) for e in document.get("events") or []],
        behaviors=[_behavior(b) for b in document.get("behaviors") or []],
        record_detector=bool(record.get("detector", False)),
        goals=inline_goals(document),
    )


def load_scenario(path: str) -> Scenario:
    return scenario_from_document(read_yaml(path), name=path)


def validate_scenario(scenario: Scenario, model: ComputationalModel, users: List[str]) -> None:
    """Checks that every id a scenario references exists in the model or the policy set."""
    def check_stream(service_id: str, parameter_id: Optional[str]):
        if service_id not in model.services:
            raise ScenarioReferenceError(f"scenario references unknown service '{service_id}'")
        if parameter_id is not None and parameter_id not in model.catalog:
            raise ScenarioReferenceError(f"scenario references unknown parameter '{parameter_id}'")

    for behavior in scenario.behaviors:
        check_stream(behavior.service_id, behavior.parameter_id)
        if not 0 <= behavior.current_state < len(behavior.states):
            raise ScenarioReferenceError(f"initial state of {behavior.service_id} is out of range")
    for event in scenario.events:
        if isinstance(event, IssueRequests):
            for user in event.user_ids:
                if user not in users:
                    raise ScenarioReferenceError(f"scenario references unknown user '{user}'")
        elif isinstance(event, SetServiceQoS):
            check_stream(event.service_id, event.parameter_id)
        elif isinstance(event, AdvanceBehavior):
            check_stream(event.service_id, event.parameter_id)
            if not any(b.service_id == event.service_id for b in scenario.behaviors):
                raise ScenarioReferenceError(f"no behavior is defined for service '{event.service_id}'")
