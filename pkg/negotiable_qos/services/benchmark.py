"""
Selection latency benchmark over a synthetic sequential-pattern model.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np

from ..models.computational_model import ComputationalModel
from ..models.goal import GreaterThan, HighPriority, LessThan, Quantity
from ..models.parameter import Aggregator, ParameterCatalog, Polarity, QoSParameter
from ..models.policy import SelectionPolicy
from ..models.scenario import BenchmarkReport
from ..models.service import Service, Variant
from .dispatcher import select
from .logger import Logger
from .policy_compiler import compile_goals
from .qos_estimator import ModelStore, build_model

MAX_SERVICES_PER_VARIANT = 4
THRESHOLD_PERCENTILE = 90


def synthesize_model(n_variants: int, n_params: int, seed: int = 0) -> ComputationalModel:
    """Random model: uniform service values, negative parameters summed, positive ones by min."""
    rng = np.random.default_rng(seed)
    polarities = rng.random(n_params) < 0.5
    parameters = [
        QoSParameter(
            id=f"p{i:02d}",
            display_name=f"parameter {i}",
            polarity=Polarity.NEGATIVE if negative else Polarity.POSITIVE,
            aggregator=Aggregator.SUM if negative else Aggregator.MIN,
        )
        for i, negative in enumerate(polarities)
    ]
    catalog = ParameterCatalog(parameters)
    n_services = max(n_variants, MAX_SERVICES_PER_VARIANT)
    values = rng.uniform(1.0, 100.0, size=(n_services, n_params))
    services = [Service(f"s{j:04d}", {p.id: float(values[j, i]) for i, p in enumerate(parameters)})
                for j in range(n_services)]
    variants = []
    for k in range(n_variants):
        size = int(rng.integers(1, MAX_SERVICES_PER_VARIANT + 1))
        chosen = rng.choice(n_services, size=size, replace=False)
        variants.append(Variant(f"v{k:04d}", tuple(services[j].id for j in chosen)))
    return build_model("synthetic", catalog, services, variants)


def synthesize_policy(model: ComputationalModel, user_id: str = "bench") -> SelectionPolicy:
    """Distributed priority over every parameter, thresholds at the 90th percentile of badness.

    Thresholds are widened to admit the first variant so at least one variant is always eligible.
    """
    anchor = model.variant_list[0]
    goals = [HighPriority(tuple(model.catalog.ids))]
    for parameter in model.catalog:
        column = np.array([float(v.cached_qos[parameter.id]) for v in model.variant_list])
        if parameter.polarity is Polarity.NEGATIVE:
            bound = max(float(np.percentile(column, THRESHOLD_PERCENTILE)), anchor.cached_qos[parameter.id])
            goals.append(LessThan((parameter.id,), Quantity(bound)))
        else:
            bound = min(float(np.percentile(column, 100 - THRESHOLD_PERCENTILE)), anchor.cached_qos[parameter.id])
            goals.append(GreaterThan((parameter.id,), Quantity(bound)))
    return compile_goals(goals, model.catalog, user_id)


def _issue(store: ModelStore, policy: SelectionPolicy, request_ids: List[int]) -> List[float]:
    latencies = []
    for request_id in request_ids:
        started = time.perf_counter()
        select(store.snapshot(), policy, str(request_id))
        latencies.append((time.perf_counter() - started) * 1000.0)
    return latencies


def _shares(n_requests: int, issuers: int) -> List[List[int]]:
    return [list(range(i + 1, n_requests + 1, issuers)) for i in range(issuers)]


def run_scale_benchmark(n_variants: int = 200, n_params: int = 20, n_requests: int = 300,
                        issuers: int = 5, seed: int = 0) -> BenchmarkReport:
    if min(n_variants, n_params, issuers) < 1 or n_requests < 0:
        raise ValueError("benchmark sizes must be positive")
    logger = Logger.get_instance()
    model = synthesize_model(n_variants, n_params, seed)
    policy = synthesize_policy(model)
    store = ModelStore(model)
    logger.log_action("BENCHMARK_STARTED",
                      f"{n_variants} variants, {n_params} parameters, {n_requests} requests, {issuers} issuers")

    results: List[List[float]] = []
    wall_ms = 0.0
    if n_requests:
        started = time.perf_counter()
        with ThreadPoolExecutor(max_workers=issuers) as pool:
            results = list(pool.map(lambda ids: _issue(store, policy, ids), _shares(n_requests, issuers)))
        wall_ms = (time.perf_counter() - started) * 1000.0

    latencies: Tuple[float, ...] = tuple(latency for share in results for latency in share)
    if latencies:
        mean_ms = float(np.mean(latencies))
        p99_ms = float(np.percentile(latencies, 99))
        max_ms = float(np.max(latencies))
    else:
        mean_ms = p99_ms = max_ms = 0.0
    report = BenchmarkReport(n_variants, n_params, n_requests, issuers, latencies,
                             mean_ms, p99_ms, max_ms, wall_ms, float(sum(latencies)))
    logger.log_action("BENCHMARK_FINISHED",
                      f"mean {mean_ms:.3f} ms, p99 {p99_ms:.3f} ms, total {report.total_ms:.1f} ms")
    return report
