from fractions import Fraction

import pytest

from negotiable_qos.errors import (DisjointnessViolation, EmptyList, GoalSyntaxError, PolarityMismatch,
                                   UnitMismatch, UnknownParameter)
from negotiable_qos.models.goal import Conditional, GreaterThan, HighPriority, LessThan, Quantity
from negotiable_qos.services.goal_parser import format_goal, format_goals, parse_goals, resolve, split_sentences


def test_parses_priority_and_thresholds():
    goals = parse_goals("Response time is high priority. Response time is less than 1 day. Cost is less than 10 euros.")
    assert goals == [
        HighPriority(("response time",)),
        LessThan(("response time",), Quantity(Fraction(1), "day")),
        LessThan(("cost",), Quantity(Fraction(10), "euros")),
    ]


def test_empty_text_has_no_goals():
    assert parse_goals("") == []
    assert parse_goals("   \n ") == []


def test_parses_conditional():
    goals = parse_goals("If cost upgrades by 20% then response time degrades by 20%.")
    assert goals == [Conditional(("cost",), Fraction(20), ("response time",), Fraction(20))]


def test_percent_sign_is_optional():
    goals = parse_goals("If cost upgrades by 20 then response time degrades by 10")
    assert goals == [Conditional(("cost",), Fraction(20), ("response time",), Fraction(10))]


def test_decimal_point_does_not_end_sentence():
    assert split_sentences("Response time is less than 4.8 s. Cost is less than 8 ct.") == [
        "Response time is less than 4.8 s",
        "Cost is less than 8 ct",
    ]
    goals = parse_goals("Response time is less than 4.8 s. Cost is less than 8 ct.")
    assert goals[0] == LessThan(("response time",), Quantity(Fraction(24, 5), "s"))
    assert goals[1] == LessThan(("cost",), Quantity(Fraction(8), "ct"))


def test_multi_word_names_and_lists():
    assert parse_goals("Maximum time to recovery is less than 1 day.") == [
        LessThan(("maximum time to recovery",), Quantity(Fraction(1), "day")),
    ]
    assert parse_goals("Response time, cost, accuracy is high priority.") == [
        HighPriority(("response time", "cost", "accuracy")),
    ]


def test_case_and_whitespace_are_insignificant():
    assert parse_goals("  RESPONSE   Time IS HIGH priority .") == [HighPriority(("response time",))]


def test_greater_than_without_unit():
    assert parse_goals("Accuracy is greater than 5.") == [GreaterThan(("accuracy",), Quantity(Fraction(5)))]


def test_unknown_form_reports_sentence_and_token():
    with pytest.raises(GoalSyntaxError) as excinfo:
        parse_goals("Response time is equal to 4 s.")
    assert excinfo.value.sentence_index == 0
    assert excinfo.value.token == "equal"


def test_error_in_second_sentence():
    with pytest.raises(GoalSyntaxError) as excinfo:
        parse_goals("Cost is high priority. Cost equals 4.")
    assert excinfo.value.sentence_index == 1
    assert excinfo.value.token == "4"


def test_trailing_tokens_are_rejected():
    with pytest.raises(GoalSyntaxError) as excinfo:
        parse_goals("Cost is high priority now.")
    assert excinfo.value.token == "now"


def test_quantity_must_be_a_number():
    with pytest.raises(GoalSyntaxError) as excinfo:
        parse_goals("Cost is less than ten ct.")
    assert excinfo.value.token == "ten"


def test_percentage_must_be_positive():
    with pytest.raises(GoalSyntaxError):
        parse_goals("If cost upgrades by 0% then response time degrades by 10%.")


def test_empty_parameter_list():
    with pytest.raises(EmptyList):
        parse_goals("is high priority.")
    with pytest.raises(EmptyList):
        parse_goals("Cost, is high priority.")


def test_duplicate_name_in_list():
    with pytest.raises(GoalSyntaxError) as excinfo:
        parse_goals("Cost, cost is high priority.")
    assert excinfo.value.reason == "duplicate parameter"


def test_conditional_lists_must_be_disjoint():
    with pytest.raises(DisjointnessViolation) as excinfo:
        parse_goals("If cost upgrades by 20% then cost degrades by 10%.")
    assert excinfo.value.shared == ["cost"]


def test_format_round_trips():
    statements = [
        HighPriority(("response time", "cost")),
        LessThan(("response time",), Quantity(Fraction(24, 5), "s")),
        GreaterThan(("accuracy",), Quantity(Fraction(5))),
        Conditional(("cost",), Fraction(25, 2), ("response time", "accuracy"), Fraction(150)),
    ]
    for statement in statements:
        assert parse_goals(format_goal(statement)) == [statement]
    assert parse_goals(format_goals(statements)) == statements


def test_resolve_converts_units(catalog):
    resolved = resolve(parse_goals("Cost is less than 10 euros. Response time is less than 1 day."), catalog)
    assert resolved == [
        LessThan(("cost",), Quantity(Fraction(1000), "ct")),
        LessThan(("response_time",), Quantity(Fraction(86400), "s")),
    ]


def test_resolve_fractional_conversion(catalog):
    resolved = resolve(parse_goals("Response time is less than 300 ms."), catalog)
    assert resolved[0].value == Quantity(Fraction(3, 10), "s")


def test_resolve_unitless_uses_canonical_unit(catalog):
    resolved = resolve(parse_goals("Accuracy is greater than 5. Cost is less than 8."), catalog)
    assert resolved == [
        GreaterThan(("accuracy",), Quantity(Fraction(5), "")),
        LessThan(("cost",), Quantity(Fraction(8), "ct")),
    ]


def test_resolve_aliases_and_dedupe(catalog):
    resolved = resolve(parse_goals("RT, response time is high priority. C is less than 1 euro."), catalog)
    assert resolved == [
        HighPriority(("response_time",)),
        LessThan(("cost",), Quantity(Fraction(100), "ct")),
    ]


def test_resolve_keeps_order_and_count(catalog):
    text = "If cost upgrades by 20% then response time degrades by 20%. Cost is less than 10 ct. Response time is less than 4 s."
    resolved = resolve(parse_goals(text), catalog)
    assert [type(s) for s in resolved] == [Conditional, LessThan, LessThan]
    assert resolved[0] == Conditional(("cost",), Fraction(20), ("response_time",), Fraction(20))


def test_resolve_unknown_parameter(catalog):
    with pytest.raises(UnknownParameter) as excinfo:
        resolve(parse_goals("Speed is high priority."), catalog)
    assert excinfo.value.name == "speed"


def test_resolve_unit_mismatch(catalog):
    with pytest.raises(UnitMismatch) as excinfo:
        resolve(parse_goals("Response time is less than 4 ct."), catalog)
    assert excinfo.value.parameter_id == "response_time"


def test_resolve_polarity_mismatch(catalog):
    with pytest.raises(PolarityMismatch):
        resolve(parse_goals("Accuracy is less than 5."), catalog)
    with pytest.raises(PolarityMismatch):
        resolve(parse_goals("Cost is greater than 5 ct."), catalog)
