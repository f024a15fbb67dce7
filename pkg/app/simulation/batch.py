"""Cross-product batches of episodes and their aggregate table.

Each episode draws from its own stream derived from (master seed, policy,
departure, adoption, episode index). A policy and its oracle twin share the
success-draw stream and every policy shares the observation streams of a
(departure, adoption, index) cell, so comparisons are paired. Listing order
of the policies has no effect on any number.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from app.config import Config
from app.errors import ModelAssumptionError
from app.models.policies import PolicyKind, PolicyRegistry, PolicySpec
from app.utils.seeding import derive_seed
from .engine import ScenarioConfig, build_streams, run_episode

logger = logging.getLogger(__name__)

EPISODE_COLUMNS = ["policy", "adoption", "departure", "seed_index", "seed", "total_minutes",
                   "n_attempts", "capped", "first_target", "final_lot"]


@dataclass(frozen=True)
class BatchResult:
    episodes: pd.DataFrame
    aggregate: pd.DataFrame


def episode_seed(master: int, spec: PolicySpec, departure: float, adoption: float, index: int) -> int:
    return derive_seed(master, spec.base_name, float(departure), float(adoption), index)


def stream_seed(master: int, departure: float, adoption: float, index: int) -> int:
    return derive_seed(master, "streams", float(departure), float(adoption), index)


def _run_cell(cfg: ScenarioConfig, spec: PolicySpec, adoption: float,
              departures: Sequence[float], seeds: int) -> List[Dict[str, object]]:
    policy = PolicyRegistry.create(spec)
    rows = []
    for departure in departures:
        for index in range(seeds):
            streams = None
            if not spec.oracle and policy.uses_belief:
                streams = build_streams(cfg, adoption, stream_seed(cfg.master_seed, departure, adoption, index))
            seed = episode_seed(cfg.master_seed, spec, departure, adoption, index)
            result = run_episode(cfg, policy, seed, departure=departure, adoption=adoption, streams=streams)
            row = result.as_row()
            row["seed_index"] = index
            rows.append(row)
    return rows


def _unique(policies: Iterable[PolicySpec]) -> List[PolicySpec]:
    seen = {}
    for spec in policies:
        seen.setdefault(spec.name, spec)
    return list(seen.values())


def run_batch(cfg: ScenarioConfig, policies: Optional[Sequence[PolicySpec]] = None,
              seeds: Optional[int] = None, departures: Optional[Sequence[float]] = None,
              adoptions: Optional[Sequence[float]] = None, workers: Optional[int] = None) -> BatchResult:
    """Run every (policy, adoption, departure, seed) episode and aggregate.

    Args:
        cfg: Scenario; its lists are used where arguments are omitted.
        policies: Policies to run; duplicates by name run once.
        seeds: Episodes per departure.
        departures: Departure minutes.
        adoptions: Connected-user adoption rates.
        workers: Process pool size; 1 runs serially.

    Returns:
        Per-episode frame and the aggregate frame.
    """
    policies = _unique(cfg.policies if policies is None else policies)
    seeds = cfg.seeds if seeds is None else seeds
    departures = list(cfg.departures if departures is None else departures)
    adoptions = list(cfg.adoptions if adoptions is None else adoptions)
    workers = Config.WORKERS if workers is None else workers
    if not policies or not departures or not adoptions or seeds < 1:
        raise ModelAssumptionError("a batch needs at least one policy, departure, adoption rate and seed")

    cells = [(spec, r) for spec in policies for r in adoptions]
    logger.info(f"Running {len(cells) * len(departures) * seeds} episodes for scenario '{cfg.name}'")
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_cell, cfg, spec, r, departures, seeds) for spec, r in cells]
            chunks = [f.result() for f in futures]
    else:
        chunks = [_run_cell(cfg, spec, r, departures, seeds) for spec, r in cells]

    episodes = pd.DataFrame([row for chunk in chunks for row in chunk], columns=EPISODE_COLUMNS)
    episodes = episodes.sort_values(["policy", "adoption", "departure", "seed_index"],
                                    kind="mergesort").reset_index(drop=True)
    return BatchResult(episodes=episodes, aggregate=aggregate(episodes, policies))


def aggregate(episodes: pd.DataFrame, policies: Optional[Sequence[PolicySpec]] = None) -> pd.DataFrame:
    """Mean and std per (policy, adoption) with gains against baselines and oracle twins.

    ``gain_vs_bl_pat = 1 - mean / mean(baseline-patient)``, likewise for the
    impatient baseline, and ``perf_vs_oracle = 1 - mean / mean(oracle twin)``;
    signs are kept, so losses are negative.
    """
    grouped = episodes.groupby(["policy", "adoption"], sort=True)["total_minutes"]
    agg = grouped.agg(mean="mean", std="std", n="count").reset_index()
    agg["std"] = agg["std"].fillna(0.0)
    agg["capped"] = episodes.groupby(["policy", "adoption"], sort=True)["capped"].sum().to_numpy().astype(int)

    means = {(row.policy, row.adoption): row.mean for row in agg.itertuples()}
    kinds = {spec.name: spec for spec in (policies or [])}

    def _gain(policy: str, adoption: float, baseline: str) -> float:
        base = means.get((baseline, adoption))
        return 1.0 - means[(policy, adoption)] / base if base else np.nan

    def _oracle(policy: str, adoption: float) -> float:
        spec = kinds.get(policy)
        if spec is not None and (spec.oracle or spec.kind is not PolicyKind.PA):
            return np.nan
        if spec is None and policy.endswith("-oracle"):
            return np.nan
        twin = means.get((policy + "-oracle", adoption))
        return 1.0 - means[(policy, adoption)] / twin if twin else np.nan

    agg["gain_vs_bl_pat"] = [_gain(p, a, PolicyKind.BASELINE_PATIENT.value) for p, a in zip(agg.policy, agg.adoption)]
    agg["gain_vs_bl_imp"] = [_gain(p, a, PolicyKind.BASELINE_IMPATIENT.value) for p, a in zip(agg.policy, agg.adoption)]
    agg["perf_vs_oracle"] = [_oracle(p, a) for p, a in zip(agg.policy, agg.adoption)]
    agg["mean_std"] = [f"{m:.1f} ± {s:.1f}" for m, s in zip(agg["mean"], agg["std"])]
    return agg
