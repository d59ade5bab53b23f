from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from negotiable_qos.errors import IncompletePolicy, NoEligibleVariant, ZeroThreshold
from negotiable_qos.models.parameter import Polarity
from negotiable_qos.models.policy import SelectionPolicy
from negotiable_qos.models.service import Variant
from negotiable_qos.services.benchmark import synthesize_model, synthesize_policy
from negotiable_qos.services.dispatcher import criteria, evaluate, exclude, score, select, sigma
from negotiable_qos.services.policy_compiler import activate_policies
from negotiable_qos.services.qos_estimator import build_model, reestimate


@pytest.fixture
def policies(model, goal_texts):
    return activate_policies(goal_texts, model)


def test_sigma_examples():
    assert sigma(Fraction(3), Fraction(10), Polarity.NEGATIVE) == -70
    assert sigma(Fraction(9), Fraction(5), Polarity.POSITIVE) == -80
    assert sigma(Fraction(2), Fraction(5), Polarity.POSITIVE) == 60
    assert sigma(Fraction(7), Fraction(7), Polarity.NEGATIVE) == 0
    assert sigma(Fraction(7), Fraction(7), Polarity.POSITIVE) == 0


def test_sigma_at_zero_threshold():
    with pytest.raises(ZeroThreshold):
        sigma(Fraction(1), Fraction(0), Polarity.NEGATIVE)


def test_distributed_excludes_low_accuracy(model, policies):
    eligible, excluded = exclude(model, policies["distributed"])
    assert eligible == ["V1", "V3", "V4", "V5"]
    assert excluded == [("V2", "accuracy")]


def test_conditional_exclusions(model, policies):
    eligible, excluded = exclude(model, policies["conditional"])
    assert eligible == ["V3", "V5"]
    assert {variant for variant, _ in excluded} == {"V1", "V2", "V4"}
    assert ("V1", "cost") in excluded
    assert ("V2", "response_time") in excluded


def test_loose_thresholds_exclude_nothing(model):
    policy = SelectionPolicy("u", {"cost": Fraction(1)}, {"response_time": 100, "cost": 100, "accuracy": 1})
    eligible, excluded = exclude(model, policy)
    assert len(eligible) == 5
    assert excluded == []


def test_scores(model, policies):
    distributed = policies["distributed"]
    row, violated = evaluate(model.variants["V5"], criteria(model, distributed))
    assert not violated
    assert row == {"response_time": -65, "cost": -60, "accuracy": -80}
    assert score(model.variants["V5"], distributed, row) == Fraction(-205, 3)

    conditional = policies["conditional"]
    row, _ = evaluate(model.variants["V3"], criteria(model, conditional))
    assert score(model.variants["V3"], conditional, row) == Fraction(-11875, 1000)


def test_single_priority_score_is_that_sigma(model, policies):
    row, _ = evaluate(model.variants["V1"], criteria(model, policies["high"]))
    assert score(model.variants["V1"], policies["high"], row) == row["response_time"] == -70


def test_initial_selections(model, policies):
    selected = {user: select(model, policy, "1")[0] for user, policy in policies.items()}
    assert selected == {"high": "V1", "distributed": "V5", "conditional": "V3"}


def test_distributed_tie_goes_to_smallest_worst_sigma(model, policies):
    snapshot = reestimate(reestimate(model, "estimate_time", "response_time", Fraction(5, 2)), "road_info", "cost", 6)
    selected, trace = select(snapshot, policies["distributed"], "26")
    assert trace.scores["V1"] == trace.scores["V5"] == Fraction(-205, 3)
    assert trace.tie_break_applied
    assert selected == "V5"


def test_remaining_tie_goes_to_smallest_id(model, catalog):
    twins = build_model("twins", catalog, model.services.values(), [
        Variant("B", ("road_info", "estimate_time")),
        Variant("A", ("road_info", "estimate_time")),
    ])
    policy = SelectionPolicy("u", {"cost": Fraction(1)}, {"response_time": 10, "cost": 20, "accuracy": 2})
    selected, trace = select(twins, policy, "1")
    assert trace.tie_break_applied
    assert selected == "A"


def test_zero_threshold_compares_directly(model):
    policies = activate_policies({"free": "Cost is less than 0 ct."}, model)
    selected, trace = select(model, policies["free"], "1")
    assert selected == "V2"
    assert trace.sigma["V2"]["cost"] is None
    assert {variant for variant, _ in trace.excluded} == {"V1", "V3", "V4", "V5"}
    assert trace.scores == {"V2": 0}


def test_no_eligible_variant(model):
    policy = SelectionPolicy("strict", {}, {"response_time": 1, "cost": 20, "accuracy": 2})
    with pytest.raises(NoEligibleVariant) as excinfo:
        select(model, policy, "7")
    assert excinfo.value.user_id == "strict"
    assert excinfo.value.request_id == "7"
    assert len(excinfo.value.excluded) == 5


def test_incomplete_policy(model):
    with pytest.raises(IncompletePolicy):
        select(model, SelectionPolicy("u", {}, {"cost": 10}), "1")


def test_trace_record(model, policies):
    _, trace = select(model, policies["distributed"], "1")
    assert trace.to_record() == {
        "type": "selection",
        "requestId": "1",
        "userId": "distributed",
        "modelVersion": 0,
        "selected": "V5",
        "excluded": [["V2", "accuracy"]],
        "scores": {"V1": "-66.666667", "V3": "-60.000000", "V4": "-33.333333", "V5": "-68.333333"},
        "tieBreakApplied": False,
    }


def test_concurrent_selections_agree(model, policies):
    policy = policies["conditional"]
    expected = select(model, policy, "1")[1]
    with ThreadPoolExecutor(max_workers=8) as pool:
        traces = list(pool.map(lambda _: select(model, policy, "1")[1], range(64)))
    assert all(trace == expected for trace in traces)


def test_float_models_match_value_by_value_evaluation():
    model = synthesize_model(60, 6, seed=3)
    assert model.qos_matrix is not None and model.qos_matrix.shape == (60, 6)
    policy = synthesize_policy(model)
    zero_first = policy.with_changes(thresholds={**policy.thresholds, "p00": 0.0})

    for current in (policy, zero_first):
        checks = criteria(model, current)
        expected_sigma, expected_scores, expected_excluded = {}, {}, []
        for variant in model.variant_list:
            row, violated = evaluate(variant, checks)
            expected_sigma[variant.id] = row
            expected_excluded.extend((variant.id, parameter_id) for parameter_id in violated)
            if not violated:
                expected_scores[variant.id] = score(variant, current, row)
        if not expected_scores:
            with pytest.raises(NoEligibleVariant):
                select(model, current, "1")
            continue
        _, trace = select(model, current, "1")
        assert trace.sigma == expected_sigma
        assert trace.scores == expected_scores
        assert list(trace.excluded) == expected_excluded


def test_exact_models_have_no_float_matrix(model):
    assert model.qos_matrix is None
