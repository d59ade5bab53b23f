"""
Compiles resolved goals into a SelectionPolicy.

Statements take effect in statement order and a later statement overwrites an earlier one
touching the same field. A Conditional waits until every threshold it names has been
declared, then takes effect right after the statement that declared the last of them, so
"If cost upgrades by 20% then ... . Cost is less than 10 ct. ..." still reads the 10 ct.
"""

from fractions import Fraction
from typing import Dict, List, Mapping, Sequence

from ..errors import (ConditionalOnZeroThreshold, ConditionalWithoutThreshold, DisjointnessViolation, EmptyModel,
                      PolarityMismatch)
from ..models.computational_model import ComputationalModel
from ..models.goal import Conditional, GreaterThan, HighPriority, LessThan, ResolvedGoal
from ..models.parameter import ParameterCatalog, Polarity
from ..models.policy import SelectionPolicy
from .goal_parser import parse_goals, resolve
from .logger import Logger


def compile_goals(goals: Sequence[ResolvedGoal], catalog: ParameterCatalog, user_id: str = "default") -> SelectionPolicy:
    policy = SelectionPolicy(user_id, {parameter_id: Fraction(0) for parameter_id in catalog.ids})
    pending: List[Conditional] = []

    for statement in goals:
        if isinstance(statement, HighPriority):
            share = Fraction(1, len(statement.params))
            policy = policy.with_changes(
                priorities={pid: (share if pid in statement.params else Fraction(0)) for pid in catalog.ids})
        elif isinstance(statement, (LessThan, GreaterThan)):
            polarity = Polarity.NEGATIVE if isinstance(statement, LessThan) else Polarity.POSITIVE
            thresholds, explicit = dict(policy.thresholds), dict(policy.explicit)
            for parameter_id in statement.params:
                parameter = catalog.get(parameter_id)
                if parameter.polarity is not polarity:
                    raise PolarityMismatch(parameter_id, type(statement).__name__, parameter.polarity.value)
                thresholds[parameter_id] = statement.value.magnitude
                explicit[parameter_id] = True
            policy = policy.with_changes(thresholds=thresholds, explicit=explicit)
        elif isinstance(statement, Conditional):
            _check_disjoint(statement)
            pending.append(statement)

        waiting = []
        for conditional in pending:
            if all(policy.has_explicit_threshold(pid) for pid in conditional.params):
                policy = apply_conditional(policy, conditional, catalog)
            else:
                waiting.append(conditional)
        pending = waiting

    for conditional in pending:
        missing = next(pid for pid in conditional.params if not policy.has_explicit_threshold(pid))
        raise ConditionalWithoutThreshold(missing)
    return policy


def _check_disjoint(statement: Conditional) -> None:
    shared = set(statement.first_params) & set(statement.second_params)
    if shared:
        raise DisjointnessViolation(shared)


def apply_conditional(policy: SelectionPolicy, statement: Conditional, catalog: ParameterCatalog) -> SelectionPolicy:
    """Tightens the upgrading thresholds, relaxes the degrading ones and rebalances priorities.

    The upgrading list is tightened by first_value% and the degrading list relaxed by
    second_value%, which is what reproduces T_C = 8ct and T_RT = 4.8s for
    "If cost upgrades by 20% then response time degrades by 20%" over 10ct / 4s.
    """
    first, second = statement.first_params, statement.second_params
    _check_disjoint(statement)
    for parameter_id in statement.params:
        if not policy.has_explicit_threshold(parameter_id):
            raise ConditionalWithoutThreshold(parameter_id)
        if policy.thresholds[parameter_id] == 0:
            raise ConditionalOnZeroThreshold(parameter_id)

    thresholds = dict(policy.thresholds)
    for parameter_id in first:
        thresholds[parameter_id] = _shift(thresholds[parameter_id], statement.first_value,
                                          tighten=True, polarity=catalog.get(parameter_id).polarity)
    for parameter_id in second:
        thresholds[parameter_id] = _shift(thresholds[parameter_id], statement.second_value,
                                          tighten=False, polarity=catalog.get(parameter_id).polarity)

    m, n = len(first), len(second)
    max_fraction = max(statement.first_value, statement.second_value) / 100
    priorities: Dict[str, Fraction] = {pid: Fraction(0) for pid in catalog.ids}
    if max_fraction > 1:
        for parameter_id in first:
            priorities[parameter_id] = Fraction(1, m)
        for parameter_id in second:
            priorities[parameter_id] = Fraction(0)
    else:
        seed = Fraction(1, m + n)
        for parameter_id in statement.params:
            priorities[parameter_id] = seed
        min_priority = min(priorities[pid] for pid in first)
        moved = Fraction(0)
        for parameter_id in second:
            moved += priorities[parameter_id] - min_priority * max_fraction
            priorities[parameter_id] = min_priority * max_fraction
        for parameter_id in first:
            priorities[parameter_id] += moved / m

    return policy.with_changes(priorities=priorities, thresholds=thresholds)


def _shift(threshold, percentage: Fraction, *, tighten: bool, polarity: Polarity):
    delta = threshold * percentage / 100
    lower = tighten == (polarity is Polarity.NEGATIVE)
    return threshold - delta if lower else threshold + delta


def default_thresholds(policy: SelectionPolicy, model: ComputationalModel) -> SelectionPolicy:
    """Fills every missing threshold with the loosest initial variant estimate.

    Called once when a policy is activated; the defaults are frozen afterwards.
    """
    variants = model.variant_list
    if not variants:
        raise EmptyModel()
    thresholds = dict(policy.thresholds)
    explicit = dict(policy.explicit)
    for parameter in model.catalog:
        if parameter.id in thresholds:
            continue
        values = [variant.cached_qos[parameter.id] for variant in variants]
        thresholds[parameter.id] = max(values) if parameter.polarity is Polarity.NEGATIVE else min(values)
        explicit[parameter.id] = False
    return policy.with_changes(thresholds=thresholds, explicit=explicit)


def build_policy(user_id: str, goal_text: str, catalog: ParameterCatalog) -> SelectionPolicy:
    """Goal text to policy: parse, resolve against the catalog, compile."""
    return compile_goals(resolve(parse_goals(goal_text), catalog), catalog, user_id)


def activate_policies(goal_texts: Mapping[str, str], model: ComputationalModel) -> Dict[str, SelectionPolicy]:
    """Compiles every user's goals and freezes default thresholds against the model's initial estimates."""
    logger = Logger.get_instance()
    policies = {}
    for user_id, text in goal_texts.items():
        policies[user_id] = default_thresholds(build_policy(user_id, text, model.catalog), model)
        logger.log_action("POLICY_ACTIVATED", f"{user_id}: {policies[user_id].to_document()}")
    return policies
