"""
Cumulative variant QoS and re-estimation on service changes.
"""

import math
import threading
from typing import Dict, Mapping

from ..errors import InvalidModel, MissingParameterValue, MissingService
from ..models.computational_model import ComputationalModel
from ..models.parameter import Aggregator, ParameterCatalog
from ..models.service import Service, Variant
from ..utils import Number, format_number
from .logger import Logger


def _combine(aggregator: Aggregator, values):
    if aggregator is Aggregator.SUM:
        return sum(values[1:], values[0])
    if aggregator is Aggregator.MIN:
        return min(values)
    if aggregator is Aggregator.MAX:
        return max(values)
    if aggregator is Aggregator.PRODUCT:
        return math.prod(values)
    return sum(values[1:], values[0]) / len(values)


def aggregate(variant: Variant, services: Mapping[str, Service], catalog: ParameterCatalog) -> Dict[str, Number]:
    """Applies each parameter's aggregator over the variant's services in sequence order."""
    if not variant.services:
        raise InvalidModel(f"variant '{variant.id}' has no services")
    constituents = []
    for service_id in variant.services:
        service = services.get(service_id)
        if service is None:
            raise MissingService(service_id, variant.id)
        constituents.append(service)
    result: Dict[str, Number] = {}
    for parameter in catalog:
        values = []
        for service in constituents:
            if parameter.id not in service.qos:
                raise MissingParameterValue(service.id, parameter.id)
            values.append(service.qos[parameter.id])
        result[parameter.id] = _combine(parameter.aggregator, values)
    return result


def estimate(variant: Variant, services: Mapping[str, Service], catalog: ParameterCatalog) -> Variant:
    return Variant(variant.id, variant.services, variant.pattern, aggregate(variant, services, catalog))


def build_model(requirement_id: str, catalog: ParameterCatalog, services, variants, version: int = 0) -> ComputationalModel:
    """Initial estimation: computes cached QoS for every variant."""
    service_map = {s.id: s for s in services}
    estimated = [estimate(v, service_map, catalog) for v in variants]
    return ComputationalModel(requirement_id, catalog, service_map.values(), estimated, version)


def reestimate(model: ComputationalModel, service_id: str, parameter_id: str, new_value: Number) -> ComputationalModel:
    """Returns the next model version with one service value replaced.

    Only variants that use the service are re-aggregated; the others are carried over unchanged.
    """
    service = model.service(service_id)
    model.catalog.get(parameter_id)
    services = dict(model.services)
    services[service_id] = service.with_value(parameter_id, new_value)
    variants = [estimate(v, services, model.catalog) if v.uses(service_id) else v for v in model.variant_list]
    return ComputationalModel(model.requirement_id, model.catalog, services.values(), variants, model.version + 1)


def snapshot(model: ComputationalModel) -> ComputationalModel:
    """Models are immutable, so the model itself is a consistent read handle for its version."""
    return model


class ModelStore:
    """Single writer publishing immutable model snapshots.

    Readers call snapshot() and never block; writers are serialized by a lock and publish
    each new version with a single reference assignment.
    """

    def __init__(self, model: ComputationalModel):
        self._current = model
        self._write_lock = threading.Lock()
        self.reestimations = 0
        self.logger = Logger.get_instance()

    def snapshot(self) -> ComputationalModel:
        return snapshot(self._current)

    def reestimate(self, service_id: str, parameter_id: str, new_value: Number) -> ComputationalModel:
        with self._write_lock:
            previous = self._current
            old_value = previous.service(service_id).qos.get(parameter_id)
            updated = reestimate(previous, service_id, parameter_id, new_value)
            self._current = updated
            self.reestimations += 1
        self.logger.log_reestimation(
            f"{service_id}.{parameter_id}",
            format_number(old_value) if old_value is not None else "-",
            format_number(new_value),
            [v.id for v in updated.variants_using(service_id)],
            updated.version,
        )
        return updated
