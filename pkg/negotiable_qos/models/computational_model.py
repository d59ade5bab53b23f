from functools import cached_property
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional

import numpy as np

from ..errors import InvalidModel, MissingService, UnknownService
from ..utils import is_finite
from .parameter import ParameterCatalog, Polarity
from .service import SEQUENCE, Service, Variant


class ComputationalModel:
    """Immutable, versioned view of one functional requirement: its parameter catalog,
    constituent services and variants. Updates build a new instance with a higher version.
    """

    def __init__(self, requirement_id: str, catalog: ParameterCatalog, services: Iterable[Service],
                 variants: Iterable[Variant], version: int = 0):
        self.requirement_id = requirement_id
        self.catalog = catalog
        self._services: Dict[str, Service] = {s.id: s for s in services}
        self._variants: Dict[str, Variant] = {v.id: v for v in variants}
        self.version = version
        self._validate()

    def _validate(self):
        for service in self._services.values():
            for parameter_id, value in service.qos.items():
                parameter = self.catalog.get(parameter_id)
                if not is_finite(value):
                    raise InvalidModel(f"service '{service.id}' has a non-finite {parameter_id}")
                if parameter.polarity is Polarity.NEGATIVE and value < 0:
                    raise InvalidModel(f"service '{service.id}' has a negative {parameter_id}")
        for variant in self._variants.values():
            if not variant.services:
                raise InvalidModel(f"variant '{variant.id}' has no services")
            if variant.pattern != SEQUENCE:
                raise InvalidModel(f"variant '{variant.id}' uses unsupported pattern '{variant.pattern}'")
            for service_id in variant.services:
                if service_id not in self._services:
                    raise MissingService(service_id, variant.id)

    def __repr__(self):
        return (f"ComputationalModel(requirement_id={self.requirement_id!r}, version={self.version!r}, "
                f"variants={list(self._variants)!r})")

    @property
    def services(self) -> Mapping[str, Service]:
        return MappingProxyType(self._services)

    @property
    def variants(self) -> Mapping[str, Variant]:
        return MappingProxyType(self._variants)

    @property
    def variant_list(self) -> List[Variant]:
        return list(self._variants.values())

    def service(self, service_id: str) -> Service:
        try:
            return self._services[service_id]
        except KeyError:
            raise UnknownService(service_id) from None

    def variants_using(self, service_id: str) -> List[Variant]:
        return [v for v in self._variants.values() if v.uses(service_id)]

    @cached_property
    def qos_matrix(self) -> Optional[np.ndarray]:
        """Variants x parameters array of cached QoS, in variant and catalog order.

        None unless every value is a float; exact models are evaluated value by value.
        """
        ids = self.catalog.ids
        rows = [[variant.cached_qos[pid] for pid in ids] for variant in self._variants.values()]
        if not all(type(value) is float for row in rows for value in row):
            return None
        return np.array(rows, dtype=float).reshape(len(rows), len(ids))
