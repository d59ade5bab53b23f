import copy
from fractions import Fraction

import pytest

from negotiable_qos import VERSION
from negotiable_qos.errors import InvalidModel
from negotiable_qos.models.parameter import Aggregator, ChangeRule
from negotiable_qos.services.model_loader import model_from_document
from negotiable_qos.services.transformation_manager import TransformationManager, default_transformations, version_key
from negotiable_qos.transformations import v0_1_add_change_rule, v0_2_add_aggregator


@pytest.fixture(scope="module")
def transformation_manager():
    return TransformationManager(VERSION, default_transformations)


def _legacy_document():
    return {
        "requirement": "legacy",
        "parameters": [{"id": "latency", "polarity": "negative", "unit": "ms"}],
        "services": [{"id": "a", "qos": {"latency": 2}}, {"id": "b", "qos": {"latency": 3}}],
        "variants": [{"id": "V", "services": ["a", "b"]}],
    }


def test_adds_change_rule_if_missing():
    updated = v0_1_add_change_rule.transform(_legacy_document())
    assert updated["parameters"][0]["change_rule"] == "stable"
    assert updated["version"] == VERSION


def test_does_not_overwrite_existing_change_rule():
    document = _legacy_document()
    document["parameters"][0]["change_rule"] = "fluctuating"
    updated = v0_1_add_change_rule.transform(document)
    assert updated["parameters"][0]["change_rule"] == "fluctuating"


def test_adds_aggregator_and_pattern_if_missing():
    updated = v0_2_add_aggregator.transform(_legacy_document())
    assert updated["parameters"][0]["aggregator"] == "sum"
    assert updated["variants"][0]["pattern"] == "sequence"
    assert updated["version"] == VERSION


def test_handles_missing_sections():
    assert v0_2_add_aggregator.transform({})["version"] == VERSION


def test_transformation_manager_updates_version_to_latest(transformation_manager):
    document = _legacy_document()
    original = copy.deepcopy(document)
    assert transformation_manager.needs_upgrade(document)
    upgraded = transformation_manager.apply_transformations(document)
    assert upgraded["version"] == VERSION
    assert upgraded["parameters"][0]["change_rule"] == "stable"
    assert upgraded["parameters"][0]["aggregator"] == "sum"
    # loaded documents are never modified in place
    assert document == original


def test_partial_upgrade_keeps_later_fields(transformation_manager):
    document = _legacy_document()
    document["version"] = "V0.1"
    document["parameters"][0]["change_rule"] = "fluctuating"
    upgraded = transformation_manager.apply_transformations(document)
    assert upgraded["parameters"][0]["change_rule"] == "fluctuating"
    assert upgraded["parameters"][0]["aggregator"] == "sum"


def test_current_documents_pass_through(transformation_manager):
    document = _legacy_document()
    document["version"] = VERSION
    assert not transformation_manager.needs_upgrade(document)
    assert transformation_manager.apply_transformations(document) is document


def test_legacy_model_loads():
    model = model_from_document(_legacy_document())
    parameter = model.catalog.get("latency")
    assert parameter.change_rule is ChangeRule.STABLE
    assert parameter.aggregator is Aggregator.SUM
    assert model.variants["V"].cached_qos == {"latency": Fraction(5)}


def test_versions_compare_numerically():
    assert version_key("V0.10") > version_key("V0.2")
    assert version_key("V1.0") > version_key("V0.10")
    assert version_key(" V0.2 ") == (0, 2)


def test_double_digit_versions_upgrade_in_order():
    applied = []

    def mark(label):
        def transform(document):
            applied.append(label)
            return document
        return transform

    manager = TransformationManager("V0.10", [("V0.2", mark("V0.2")), ("V0.10", mark("V0.10"))])
    document = _legacy_document()
    document["version"] = "V0.2"
    assert manager.needs_upgrade(document)
    manager.apply_transformations(document)
    assert applied == ["V0.10"]


def test_unrecognised_version_is_invalid_model(transformation_manager):
    document = _legacy_document()
    document["version"] = "latest"
    with pytest.raises(InvalidModel):
        transformation_manager.apply_transformations(document)
