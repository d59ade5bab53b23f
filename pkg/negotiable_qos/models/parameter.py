from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import re
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from ..errors import InvalidModel, UnitMismatch, UnknownParameter


class Polarity(Enum):
    NEGATIVE = "negative"   # lower is better (response time, cost)
    POSITIVE = "positive"   # higher is better (accuracy)


class Aggregator(Enum):
    SUM = "sum"
    MIN = "min"
    MAX = "max"
    PRODUCT = "product"
    AVERAGE = "average"


class ChangeRule(Enum):
    STABLE = "stable"
    FLUCTUATING = "fluctuating"


def normalize_name(name: str) -> str:
    """Lowercases, reads underscores as spaces and collapses whitespace."""
    return re.sub(r"\s+", " ", name.replace("_", " ")).strip().lower()


@dataclass(frozen=True)
class QoSParameter:
    """One QoS dimension of the computational model.

    unit_conversions maps a unit token to the factor that converts one of that unit into the
    canonical unit (euros -> ct is 100, day -> s is 86400). The canonical unit always converts with 1.
    """
    id: str
    display_name: str
    polarity: Polarity
    canonical_unit: str = ""
    unit_conversions: Mapping[str, Fraction] = field(default_factory=dict)
    aggregator: Aggregator = Aggregator.SUM
    change_rule: ChangeRule = ChangeRule.STABLE
    aliases: Tuple[str, ...] = ()

    def __post_init__(self):
        for token, factor in self.unit_conversions.items():
            if factor <= 0:
                raise InvalidModel(f"conversion factor for '{token}' on '{self.id}' must be > 0")

    @property
    def names(self) -> List[str]:
        return [normalize_name(n) for n in (self.id, self.display_name, *self.aliases) if n]

    def conversion_factor(self, unit: str) -> Fraction:
        token = unit.strip().lower()
        if token == "" or token == self.canonical_unit.lower():
            return Fraction(1)
        for known, factor in self.unit_conversions.items():
            if known.lower() == token:
                return factor
        raise UnitMismatch(self.id, unit)


class ParameterCatalog:
    """Ordered collection of QoS parameters with name lookup."""

    def __init__(self, parameters: List[QoSParameter]):
        self._parameters: Dict[str, QoSParameter] = {}
        self._by_name: Dict[str, str] = {}
        for parameter in parameters:
            if parameter.id in self._parameters:
                raise InvalidModel(f"duplicate parameter id '{parameter.id}'")
            self._parameters[parameter.id] = parameter
            for name in parameter.names:
                owner = self._by_name.setdefault(name, parameter.id)
                if owner != parameter.id:
                    raise InvalidModel(f"parameter name '{name}' is ambiguous ({owner}, {parameter.id})")

    def __iter__(self) -> Iterator[QoSParameter]:
        return iter(self._parameters.values())

    def __len__(self) -> int:
        return len(self._parameters)

    def __contains__(self, parameter_id: str) -> bool:
        return parameter_id in self._parameters

    def __repr__(self):
        return f"ParameterCatalog({list(self._parameters)!r})"

    @property
    def ids(self) -> List[str]:
        return list(self._parameters)

    def get(self, parameter_id: str) -> QoSParameter:
        try:
            return self._parameters[parameter_id]
        except KeyError:
            raise UnknownParameter(parameter_id) from None

    def lookup(self, name: str) -> QoSParameter:
        """Finds a parameter by id, display name or alias, ignoring case and spacing."""
        parameter_id: Optional[str] = self._by_name.get(normalize_name(name))
        if parameter_id is None:
            raise UnknownParameter(name)
        return self._parameters[parameter_id]
