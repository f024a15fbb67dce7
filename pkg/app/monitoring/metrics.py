"""Process-local run metrics."""

import logging
from typing import Dict

from prometheus_client import CollectorRegistry, Counter, Histogram

from app.config import Config

logger = logging.getLogger(__name__)

REGISTRY = CollectorRegistry(auto_describe=True)

EPISODES = Counter(
    "parksim_episodes_total",
    "Simulated episodes",
    ["policy", "outcome"],  # outcome: parked or capped
    registry=REGISTRY,
)

VI_SWEEPS = Counter(
    "parksim_value_iteration_sweeps_total",
    "Synchronous value-iteration sweeps",
    registry=REGISTRY,
)

VI_DURATION = Histogram(
    "parksim_value_iteration_seconds",
    "Time taken to solve one instance by value iteration",
    buckets=[0.0005, 0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0],
    registry=REGISTRY,
)

MC_SAMPLES = Counter(
    "parksim_monte_carlo_samples_total",
    "Monte Carlo samples drawn by the oracles",
    ["oracle"],
    registry=REGISTRY,
)


def record_episode(policy: str, capped: bool) -> None:
    if Config.METRICS_ENABLED:
        EPISODES.labels(policy=policy, outcome="capped" if capped else "parked").inc()


def record_samples(oracle: str, n: int) -> None:
    if Config.METRICS_ENABLED:
        MC_SAMPLES.labels(oracle=oracle).inc(n)


def record_solve(sweeps: int, seconds: float) -> None:
    if Config.METRICS_ENABLED:
        VI_SWEEPS.inc(sweeps)
        VI_DURATION.observe(seconds)


def snapshot() -> Dict[str, float]:
    """Current metric samples keyed by sample name and labels."""
    values = {}
    for family in REGISTRY.collect():
        for sample in family.samples:
            if sample.name.endswith("_created"):
                continue
            labels = ",".join(f"{k}={v}" for k, v in sorted(sample.labels.items()))
            key = f"{sample.name}{{{labels}}}" if labels else sample.name
            values[key] = sample.value
    return values
