import threading
from fractions import Fraction

import pytest

from negotiable_qos.errors import OutOfOrderSample
from negotiable_qos.models.monitoring import MonitoringSample, ReferenceStats
from negotiable_qos.models.parameter import ChangeRule, ParameterCatalog, Polarity, QoSParameter
from negotiable_qos.services.change_detector import ChangeDetector, DetectorBank, change_threshold, ingest

FLUCTUATING = QoSParameter("response_time", "Response time", Polarity.NEGATIVE, "s",
                           change_rule=ChangeRule.FLUCTUATING)
STABLE = QoSParameter("cost", "Cost", Polarity.NEGATIVE, "ct", change_rule=ChangeRule.STABLE)
CATALOG = ParameterCatalog([FLUCTUATING, STABLE])


def _sample(value, seq, parameter="response_time", service="s"):
    return MonitoringSample(service, parameter, Fraction(value), seq)


def test_change_threshold():
    assert change_threshold(STABLE, Fraction(10)) == 0
    assert change_threshold(FLUCTUATING, Fraction(8, 5)) == Fraction(4, 5)
    assert change_threshold(FLUCTUATING, 3.0) == 1.5


def test_first_sample_starts_regime():
    stats, triggered = ingest(ReferenceStats(), _sample(1, 1), FLUCTUATING)
    assert not triggered
    assert stats == ReferenceStats(Fraction(1), 1, 1)


def test_fluctuating_trigger_resets_regime():
    stats, triggered = ingest(ReferenceStats(Fraction(1), 5, 5), _sample("1.6", 6), FLUCTUATING)
    assert triggered
    assert stats == ReferenceStats(Fraction(8, 5), 1, 6)


def test_fluctuation_within_half_updates_mean():
    stats, triggered = ingest(ReferenceStats(Fraction(8, 5), 1, 6), _sample(2, 7), FLUCTUATING)
    assert not triggered
    assert stats == ReferenceStats(Fraction(9, 5), 2, 7)


def test_deviation_of_exactly_half_does_not_trigger():
    _, triggered = ingest(ReferenceStats(Fraction(2), 3, 3), _sample(3, 4), FLUCTUATING)
    assert not triggered


def test_stable_parameter_triggers_on_any_change():
    stats, triggered = ingest(ReferenceStats(Fraction(10), 1, 1), _sample(6, 2, "cost"), STABLE)
    assert triggered
    assert stats.mean == 6
    stats, triggered = ingest(stats, _sample(6, 3, "cost"), STABLE)
    assert not triggered
    assert stats.count == 2


def test_three_regimes():
    stats = ReferenceStats()
    triggers = []
    values = [1] * 5 + ["1.6"] * 5 + ["2.5"] * 5 + [1] * 5
    for seq, value in enumerate(values, start=1):
        stats, triggered = ingest(stats, _sample(value, seq), FLUCTUATING)
        if triggered:
            triggers.append(seq)
    assert triggers == [6, 11, 16]
    assert stats == ReferenceStats(Fraction(1), 5, 20)


def test_reference_is_arithmetic_mean_of_regime():
    stats = ReferenceStats()
    for seq, value in enumerate(["1", "1.2", "1.4"], start=1):
        stats, triggered = ingest(stats, _sample(value, seq), FLUCTUATING)
        assert not triggered
    assert stats.mean == Fraction(6, 5)
    assert stats.count == 3


def test_out_of_order_sample():
    with pytest.raises(OutOfOrderSample):
        ingest(ReferenceStats(Fraction(1), 2, 5), _sample(1, 5), FLUCTUATING)
    with pytest.raises(OutOfOrderSample):
        ingest(ReferenceStats(Fraction(1), 2, 5), _sample(1, 4), FLUCTUATING)


def test_detector_bank_calls_back_on_trigger():
    seen = []
    bank = DetectorBank(CATALOG, on_trigger=seen.append, record_transitions=True)
    bank.seed("road_info", "cost", Fraction(10))
    assert bank.observe(_sample(10, bank.next_seq("road_info", "cost"), "cost", "road_info")) is False
    assert bank.observe(_sample(6, bank.next_seq("road_info", "cost"), "cost", "road_info")) is True
    assert [(s.service_id, s.value) for s in seen] == [("road_info", 6)]
    assert bank.triggers == 1
    assert bank.stats("road_info", "cost") == ReferenceStats(Fraction(6), 1, 3)
    assert [t.triggered for t in bank.transitions] == [False, False, True]
    assert bank.transitions[0].mean_before is None


def test_detector_bank_keeps_streams_apart():
    bank = DetectorBank(CATALOG)
    bank.observe(_sample(1, 1, service="a"))
    bank.observe(_sample(5, 1, service="b"))
    assert bank.observe(_sample(1, 2, service="a")) is False
    assert bank.stats("a", "response_time").count == 2
    assert bank.stats("b", "response_time").count == 1
    assert bank.stats("c", "response_time") == ReferenceStats()


class AlwaysTrigger(ChangeDetector):
    def ingest(self, stats, sample, parameter):
        return ReferenceStats(sample.value, 1, sample.seq), True


def test_detector_bank_accepts_custom_detector():
    seen = []
    bank = DetectorBank(CATALOG, detector=AlwaysTrigger(), on_trigger=seen.append)
    assert bank.observe(_sample(1, 1))
    assert bank.triggers == 1
    assert [s.seq for s in seen] == [1]
    assert bank.stats("s", "response_time") == ReferenceStats(Fraction(1), 1, 1)


def test_trigger_count_is_exact_across_streams():
    bank = DetectorBank(CATALOG, detector=AlwaysTrigger())

    def feed(service):
        for seq in range(1, 201):
            bank.observe(_sample(seq, seq, service=service))

    threads = [threading.Thread(target=feed, args=(f"s{i}",)) for i in range(8)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert bank.triggers == 8 * 200
