"""
Change detection on monitored service QoS.

A stream is one (service, parameter) pair. Its reference is the running average of the
current regime; a sample deviating from it by more than the parameter's change threshold
triggers re-estimation and starts a new regime seeded with that sample.
"""

import threading
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import OutOfOrderSample
from ..models.monitoring import DetectorTransition, MonitoringSample, ReferenceStats
from ..models.parameter import ChangeRule, ParameterCatalog, QoSParameter
from ..utils import Number, format_number
from .logger import Logger

Stream = Tuple[str, str]


def change_threshold(parameter: QoSParameter, reference: Number) -> Number:
    """0 for stable parameters, half the reference for fluctuating ones."""
    if parameter.change_rule is ChangeRule.STABLE:
        return 0
    return reference * Fraction(1, 2) if isinstance(reference, Fraction) else reference / 2


def ingest(stats: ReferenceStats, sample: MonitoringSample, parameter: QoSParameter) -> Tuple[ReferenceStats, bool]:
    if stats.last_seq is not None and sample.seq <= stats.last_seq:
        raise OutOfOrderSample(sample.service_id, sample.parameter_id, sample.seq, stats.last_seq)
    if stats.count == 0:
        return ReferenceStats(sample.value, 1, sample.seq), False
    triggered = abs(sample.value - stats.mean) > change_threshold(parameter, stats.mean)
    if triggered:
        return ReferenceStats(sample.value, 1, sample.seq), True
    count = stats.count + 1
    mean = stats.mean + (sample.value - stats.mean) / count
    return ReferenceStats(mean, count, sample.seq), False


class ChangeDetector(ABC):
    """Decides, per stream, whether a sample is a significant change."""

    @abstractmethod
    def ingest(self, stats: ReferenceStats, sample: MonitoringSample,
               parameter: QoSParameter) -> Tuple[ReferenceStats, bool]:
        pass


class FluctuationDetector(ChangeDetector):
    def ingest(self, stats, sample, parameter):
        return ingest(stats, sample, parameter)


class DetectorBank:
    """Holds one reference per stream. Ingestion within a stream is serialized by that
    stream's lock; distinct streams proceed independently.
    """

    def __init__(self, catalog: ParameterCatalog, detector: Optional[ChangeDetector] = None,
                 on_trigger: Optional[Callable[[MonitoringSample], None]] = None, record_transitions: bool = False):
        self.catalog = catalog
        self.detector = detector or FluctuationDetector()
        self.on_trigger = on_trigger
        self.record_transitions = record_transitions
        self.transitions: List[DetectorTransition] = []
        self.triggers = 0
        self._stats: Dict[Stream, ReferenceStats] = {}
        self._locks: Dict[Stream, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._seq: Dict[Stream, int] = {}
        self.logger = Logger.get_instance()

    def _lock_for(self, stream: Stream) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(stream, threading.Lock())

    def stats(self, service_id: str, parameter_id: str) -> ReferenceStats:
        return self._stats.get((service_id, parameter_id), ReferenceStats())

    def next_seq(self, service_id: str, parameter_id: str) -> int:
        stream = (service_id, parameter_id)
        with self._registry_lock:
            self._seq[stream] = self._seq.get(stream, 0) + 1
            return self._seq[stream]

    def seed(self, service_id: str, parameter_id: str, value: Number) -> None:
        """Starts a stream's first regime at a known value (the design-time estimate)."""
        self.observe(MonitoringSample(service_id, parameter_id, value, self.next_seq(service_id, parameter_id)))

    def observe(self, sample: MonitoringSample) -> bool:
        parameter = self.catalog.get(sample.parameter_id)
        with self._lock_for(sample.stream):
            before = self._stats.get(sample.stream, ReferenceStats())
            after, triggered = self.detector.ingest(before, sample, parameter)
            self._stats[sample.stream] = after
            if self.record_transitions:
                self.transitions.append(DetectorTransition(
                    sample.service_id, sample.parameter_id, sample.seq, sample.value,
                    before.mean, after.mean, after.count, triggered,
                ))
        if triggered:
            with self._registry_lock:
                self.triggers += 1
            if self.on_trigger is not None:
                self.on_trigger(sample)
            reference = format_number(before.mean) if before.mean is not None else "-"
            self.logger.log_action(
                "CHANGE_DETECTED",
                f"{sample.service_id}.{sample.parameter_id} sample {format_number(sample.value)} "
                f"deviates from reference {reference}",
            )
        return triggered
