"""
Error families raised by the engine. Each family carries the process exit code the CLI uses.
"""


class QoSEngineError(Exception):
    exit_code = 1
    family = "Engine error"


class ConfigError(QoSEngineError):
    exit_code = 1
    family = "Configuration error"


# Goal parsing (exit code 2)

class GoalParseError(QoSEngineError):
    exit_code = 2
    family = "Goal parse error"


class GoalSyntaxError(GoalParseError):
    """A sentence matches none of the four goal forms."""
    def __init__(self, sentence_index: int, token: str, reason: str = "unexpected token"):
        self.sentence_index = sentence_index
        self.token = token
        self.reason = reason
        super().__init__(f"sentence {sentence_index + 1}: {reason} '{token}'")


class EmptyList(GoalParseError):
    def __init__(self, sentence_index: int):
        self.sentence_index = sentence_index
        super().__init__(f"sentence {sentence_index + 1}: parameter list is empty")


# Resolution and compilation (exit code 3)

class GoalResolveError(QoSEngineError):
    exit_code = 3
    family = "Goal resolve error"


class UnknownParameter(GoalResolveError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown QoS parameter '{name}'")


class UnitMismatch(GoalResolveError):
    def __init__(self, parameter_id: str, unit: str):
        self.parameter_id = parameter_id
        self.unit = unit
        super().__init__(f"unit '{unit}' is not convertible for parameter '{parameter_id}'")


class PolarityMismatch(GoalResolveError):
    def __init__(self, parameter_id: str, comparator: str, polarity: str):
        self.parameter_id = parameter_id
        super().__init__(f"'{comparator}' cannot bound {polarity} parameter '{parameter_id}'")


ConflictingComparator = PolarityMismatch


class ConditionalWithoutThreshold(GoalResolveError):
    def __init__(self, parameter_id: str):
        self.parameter_id = parameter_id
        super().__init__(f"conditional goal names '{parameter_id}' which has no explicit threshold")


class ConditionalOnZeroThreshold(GoalResolveError):
    def __init__(self, parameter_id: str):
        self.parameter_id = parameter_id
        super().__init__(f"conditional goal cannot shift the zero threshold of '{parameter_id}' by a percentage")


class DisjointnessViolation(GoalResolveError):
    def __init__(self, shared):
        self.shared = sorted(shared)
        super().__init__(f"conditional goal lists share parameters: {', '.join(self.shared)}")


# Model, detector and scenario (exit code 4)

class ModelError(QoSEngineError):
    exit_code = 4
    family = "Model error"


class InvalidModel(ModelError):
    pass


class MissingService(ModelError):
    def __init__(self, service_id: str, variant_id: str = ""):
        self.service_id = service_id
        where = f" (referenced by variant '{variant_id}')" if variant_id else ""
        super().__init__(f"missing service '{service_id}'{where}")


class MissingParameterValue(ModelError):
    def __init__(self, service_id: str, parameter_id: str):
        super().__init__(f"service '{service_id}' has no value for parameter '{parameter_id}'")


class UnknownService(ModelError):
    def __init__(self, service_id: str):
        self.service_id = service_id
        super().__init__(f"unknown service '{service_id}'")


class EmptyModel(ModelError):
    def __init__(self):
        super().__init__("model has no variants")


class IncompletePolicy(ModelError):
    def __init__(self, user_id: str, parameter_id: str):
        super().__init__(f"policy for '{user_id}' has no threshold for '{parameter_id}'")


class OutOfOrderSample(ModelError):
    def __init__(self, service_id: str, parameter_id: str, seq: int, last_seq: int):
        super().__init__(f"sample {seq} for {service_id}/{parameter_id} arrived after {last_seq}")


class ScenarioReferenceError(ModelError):
    family = "Scenario error"


# Selection (exit code 5)

class NoEligibleVariant(QoSEngineError):
    exit_code = 5
    family = "No eligible variant"

    def __init__(self, user_id: str, request_id: str, excluded=()):
        self.user_id = user_id
        self.request_id = request_id
        self.excluded = list(excluded)
        super().__init__(f"every variant is excluded for user '{user_id}' at request {request_id}")


class ZeroThreshold(ArithmeticError):
    """σ is undefined at a zero threshold; the dispatcher compares directly instead."""
