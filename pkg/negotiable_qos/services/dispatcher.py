"""
Variant selection.

σ is the percentage deviation of a variant's current value from the user's threshold,
sign-normalized so that σ > 0 always means "worse than the threshold". A variant with any
σ > 0 is excluded; among the rest the one with the smallest priority-weighted σ sum wins.
Exact score ties go to the variant whose worst σ is smallest, then to the smallest id.
"""

from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from ..errors import IncompletePolicy, NoEligibleVariant, ZeroThreshold
from ..models.computational_model import ComputationalModel
from ..models.parameter import Polarity
from ..models.policy import SelectionPolicy
from ..models.service import Variant
from ..models.trace import SelectionTrace
from ..utils import Number
from .logger import Logger


class Criterion(NamedTuple):
    parameter_id: str
    threshold: Number
    polarity: Polarity
    priority: Number


def sigma(current: Number, threshold: Number, polarity: Polarity) -> Number:
    if threshold == 0:
        raise ZeroThreshold(f"σ is undefined at threshold 0 (current value {current})")
    if polarity is Polarity.NEGATIVE:
        return (current - threshold) * 100 / abs(threshold)
    return (threshold - current) * 100 / abs(threshold)


def _violates_zero(current: Number, polarity: Polarity) -> bool:
    return current > 0 if polarity is Polarity.NEGATIVE else current < 0


def criteria(snapshot: ComputationalModel, policy: SelectionPolicy) -> List[Criterion]:
    result = []
    for parameter in snapshot.catalog:
        if parameter.id not in policy.thresholds:
            raise IncompletePolicy(policy.user_id, parameter.id)
        result.append(Criterion(parameter.id, policy.thresholds[parameter.id], parameter.polarity,
                                policy.priorities.get(parameter.id, 0)))
    return result


def evaluate(variant: Variant, checks: List[Criterion]) -> Tuple[Dict[str, Optional[Number]], List[str]]:
    """Returns the variant's σ row (None at zero thresholds) and the parameters it violates."""
    row: Dict[str, Optional[Number]] = {}
    violated: List[str] = []
    for check in checks:
        current = variant.cached_qos[check.parameter_id]
        if check.threshold == 0:
            row[check.parameter_id] = None
            if _violates_zero(current, check.polarity):
                violated.append(check.parameter_id)
            continue
        value = sigma(current, check.threshold, check.polarity)
        row[check.parameter_id] = value
        if value > 0:
            violated.append(check.parameter_id)
    return row, violated


def exclude(snapshot: ComputationalModel, policy: SelectionPolicy) -> Tuple[List[str], List[Tuple[str, str]]]:
    """Splits variants into eligible ids and (variant, parameter) exclusion reasons."""
    checks = criteria(snapshot, policy)
    eligible: List[str] = []
    excluded: List[Tuple[str, str]] = []
    for variant in snapshot.variant_list:
        _, violated = evaluate(variant, checks)
        if violated:
            excluded.extend((variant.id, parameter_id) for parameter_id in violated)
        else:
            eligible.append(variant.id)
    return eligible, excluded


def score(variant: Variant, policy: SelectionPolicy, sigma_row: Dict[str, Optional[Number]]) -> Number:
    """Σ priority·σ; zero-priority parameters and zero thresholds contribute nothing."""
    total: Number = 0
    for parameter_id, value in sigma_row.items():
        weight = policy.priorities.get(parameter_id, 0)
        if weight and value is not None:
            total += weight * value
    return total


def _worst_sigma(row: Dict[str, Optional[Number]]) -> Number:
    defined = [value for value in row.values() if value is not None]
    return max(defined) if defined else 0


def _evaluate_matrix(snapshot: ComputationalModel, matrix: np.ndarray, checks: List[Criterion]):
    """Column-wise σ over a float snapshot.

    Performs the same float operations as sigma() and score() and sums each row in catalog
    order, so results are identical to the value-by-value path.
    """
    ids = [check.parameter_id for check in checks]
    thresholds = np.array([float(check.threshold) for check in checks])
    negative = np.array([check.polarity is Polarity.NEGATIVE for check in checks])
    weights = np.array([float(check.priority) for check in checks])
    zero = thresholds == 0

    sigmas = np.where(negative, matrix - thresholds, thresholds - matrix) * 100 / np.where(zero, 1.0, np.abs(thresholds))
    violated = np.where(zero, np.where(negative, matrix > 0, matrix < 0), sigmas > 0)
    contributions = np.where((weights != 0) & ~zero, weights * sigmas, 0.0)
    totals = np.cumsum(contributions, axis=1)[:, -1].tolist()

    variants = snapshot.variant_list
    zero_columns = np.flatnonzero(zero).tolist()
    sigma_matrix: Dict[str, Dict[str, Optional[Number]]] = {}
    for variant, row in zip(variants, sigmas.tolist()):
        for column in zero_columns:
            row[column] = None
        sigma_matrix[variant.id] = dict(zip(ids, row))
    rows, columns = np.nonzero(violated)
    excluded = [(variants[i].id, ids[j]) for i, j in zip(rows.tolist(), columns.tolist())]
    eligible = np.flatnonzero(~violated.any(axis=1)).tolist()
    scores = {variants[i].id: totals[i] for i in eligible}
    return sigma_matrix, excluded, scores


def _evaluate_each(snapshot: ComputationalModel, policy: SelectionPolicy, checks: List[Criterion]):
    sigma_matrix: Dict[str, Dict[str, Optional[Number]]] = {}
    excluded: List[Tuple[str, str]] = []
    scores: Dict[str, Number] = {}
    for variant in snapshot.variant_list:
        row, violated = evaluate(variant, checks)
        sigma_matrix[variant.id] = row
        if violated:
            excluded.extend((variant.id, parameter_id) for parameter_id in violated)
        else:
            scores[variant.id] = score(variant, policy, row)
    return sigma_matrix, excluded, scores


def select(snapshot: ComputationalModel, policy: SelectionPolicy, request_id: str) -> Tuple[str, SelectionTrace]:
    checks = criteria(snapshot, policy)
    matrix = snapshot.qos_matrix
    if matrix is not None and checks:
        sigma_matrix, excluded, scores = _evaluate_matrix(snapshot, matrix, checks)
    else:
        sigma_matrix, excluded, scores = _evaluate_each(snapshot, policy, checks)

    if not scores:
        Logger.get_instance().log_error(
            f"all {len(sigma_matrix)} variants excluded at model version {snapshot.version}",
            f"NoEligibleVariant[{policy.user_id}/{request_id}]",
        )
        raise NoEligibleVariant(policy.user_id, request_id, excluded)

    best = min(scores.values())
    tied = [variant_id for variant_id, value in scores.items() if value == best]
    selected = min(tied, key=lambda variant_id: (_worst_sigma(sigma_matrix[variant_id]), variant_id))
    trace = SelectionTrace(
        request_id=request_id,
        user_id=policy.user_id,
        model_version=snapshot.version,
        sigma=sigma_matrix,
        excluded=tuple(excluded),
        scores=scores,
        tie_break_applied=len(tied) > 1,
        selected=selected,
    )
    return selected, trace
