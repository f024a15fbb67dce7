"""Scenario files and the built-in synthetic sites.

A scenario file is YAML::

    network: {...}                 # see app.models.core.network
    traces: {kind: constant}       # constant | csv (path) | site (dense/sparse)
    observation: {lambda_per_hour: 20, adoptions: [0.1, 0.5]}
    policies: [pa1, {name: pa2, oracle: true}, baseline-patient]
    departures: [480, 540]
    seeds: 5
    references: {time_to_drive: 10, transit_time: 20}
"""
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from app.config import Config
from app.errors import ConfigError, ModelAssumptionError
from app.models.core.network import ParkingNetwork
from app.models.observer.traces import ProbabilityTrace, TraceKind, constant_trace, trace_from_frame
from app.models.policies import PolicySpec
from app.simulation.engine import ScenarioConfig

logger = logging.getLogger(__name__)

DAY_MINUTES = 24 * 60.0
DEFAULT_POLICIES = ("pa1", "pa2", "pa3", "pa1-oracle", "pa2-oracle", "pa3-oracle",
                    "baseline-patient", "baseline-impatient")


class TracesSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str = "constant"
    path: Optional[str] = None
    site: Optional[str] = None


class ObservationSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lambda_per_hour: Union[float, List[float]] = 20.0
    adoptions: List[float] = Field(default_factory=lambda: [0.1, 0.5])


class ReferencesSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    time_to_drive: Optional[float] = None
    transit_time: float = Field(default_factory=lambda: Config.TRANSIT_TIME)


class ScenarioFile(BaseModel):
    """Schema of a scenario file; ``network`` is validated separately."""
    model_config = ConfigDict(extra="forbid")

    name: str = "scenario"
    network: Optional[Dict[str, Any]] = None
    traces: TracesSection = Field(default_factory=TracesSection)
    observation: ObservationSection = Field(default_factory=ObservationSection)
    policies: List[Any] = Field(default_factory=lambda: list(DEFAULT_POLICIES))
    departures: List[float] = Field(default_factory=lambda: [480.0])
    seeds: int = Field(default=5, ge=1)
    horizon: float = Field(default_factory=lambda: Config.SEARCH_HORIZON_MIN)
    references: ReferencesSection = Field(default_factory=ReferencesSection)


@dataclass(frozen=True)
class Site:
    """A scenario together with its reference times."""
    scenario: ScenarioConfig
    time_to_drive: float
    transit_time: float


def _peak(hours: np.ndarray, centre: float = 13.0, width: float = 3.5) -> np.ndarray:
    return np.exp(-(((hours - centre) / width) ** 2))


def _site_traces(base: Sequence[float], dip: Sequence[float]) -> Dict[int, ProbabilityTrace]:
    minutes = np.arange(0.0, DAY_MINUTES + 1.0)
    shape = _peak(minutes / 60.0)
    return {
        j: ProbabilityTrace(minutes, np.clip(b - d * shape, 0.0, 1.0), TraceKind.EMPIRICAL,
                            {"base": b, "dip": d}, j)
        for j, (b, d) in enumerate(zip(base, dip), start=1)
    }


def dense_network(initial_probs: Sequence[float] = (0.25, 0.3, 0.95)) -> ParkingNetwork:
    """Three lots, ten minutes from the origin, walks of 2, 5 and 8 minutes."""
    return ParkingNetwork.build(
        drive_time=[[0, 10, 10, 10], [10, 0, 3, 5], [10, 3, 0, 3], [10, 5, 3, 0]],
        walk_time=[2, 5, 8],
        wait_time=5,
        initial_probs=initial_probs,
    )


def sparse_network(initial_probs: Sequence[float] = (0.6, 0.7, 0.9)) -> ParkingNetwork:
    """Three lots, six minutes from the origin, walks of 1, 4 and 7 minutes."""
    return ParkingNetwork.build(
        drive_time=[[0, 6, 6, 6], [6, 0, 2, 3], [6, 2, 0, 2], [6, 3, 2, 0]],
        walk_time=[1, 4, 7],
        wait_time=5,
        initial_probs=initial_probs,
    )


def dense_site(policies: Sequence[Any] = DEFAULT_POLICIES, seeds: int = 5,
               adoptions: Sequence[float] = (0.1, 0.5), master_seed: Optional[int] = None,
               high_availability: bool = False) -> Site:
    """Busy site: the lots nearest the destination nearly fill up around midday.

    With ``high_availability`` every lot stays at or above 0.95 all day.
    """
    if high_availability:
        traces = _site_traces(base=[0.99, 0.99, 0.99], dip=[0.04, 0.03, 0.02])
    else:
        traces = _site_traces(base=[0.25, 0.30, 0.95], dip=[0.17, 0.18, 0.15])
    net = dense_network(tuple(float(traces[j].value_at(480.0)) for j in (1, 2, 3)))
    scenario = ScenarioConfig(
        network=net,
        traces=traces,
        departures=tuple(h * 60.0 for h in range(8, 19)),
        adoptions=tuple(adoptions),
        arrival_rate_per_hour=20.0,
        policies=tuple(PolicySpec.parse(p) for p in policies),
        seeds=seeds,
        master_seed=Config.MASTER_SEED if master_seed is None else master_seed,
        name="dense-high-availability" if high_availability else "dense",
    )
    return Site(scenario, Config.TIME_TO_DRIVE_DENSE, Config.TRANSIT_TIME)


def sparse_site(policies: Sequence[Any] = DEFAULT_POLICIES, seeds: int = 5,
                adoptions: Sequence[float] = (0.1, 0.5), master_seed: Optional[int] = None) -> Site:
    """Quiet site with moderate availability everywhere."""
    traces = _site_traces(base=[0.60, 0.70, 0.90], dip=[0.15, 0.15, 0.05])
    net = sparse_network(tuple(float(traces[j].value_at(480.0)) for j in (1, 2, 3)))
    scenario = ScenarioConfig(
        network=net,
        traces=traces,
        departures=tuple(h * 60.0 for h in range(8, 17)),
        adoptions=tuple(adoptions),
        arrival_rate_per_hour=8.0,
        policies=tuple(PolicySpec.parse(p) for p in policies),
        seeds=seeds,
        master_seed=Config.MASTER_SEED if master_seed is None else master_seed,
        name="sparse",
    )
    return Site(scenario, Config.TIME_TO_DRIVE_SPARSE, Config.TRANSIT_TIME)


SITES = {"dense": dense_site, "sparse": sparse_site}


def _csv_traces(path: str, n_lots: int) -> Dict[int, ProbabilityTrace]:
    if not os.path.exists(path):
        raise ConfigError(f"trace file not found: {path}")
    frame = pd.read_csv(path)
    missing = {"minute", "lot_id", "p"} - set(frame.columns)
    if missing:
        raise ConfigError(f"trace file {path} lacks columns {sorted(missing)}")
    traces = {}
    for j in range(1, n_lots + 1):
        rows = frame[frame["lot_id"] == j]
        if rows.empty:
            raise ConfigError(f"trace file {path} has no rows for lot {j}")
        traces[j] = trace_from_frame(rows, lot=j)
    return traces


def read_scenario_file(path: str) -> ScenarioFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as e:
        raise ConfigError(f"cannot read scenario file {path}: {e}")
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse scenario file {path}: {e}")
    try:
        return ScenarioFile.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"scenario file {path} failed schema validation",
                          [f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()])


def load_scenario(path: str, master_seed: Optional[int] = None) -> Site:
    """Scenario and reference times from a YAML file."""
    spec = read_scenario_file(path)
    if spec.traces.kind == "site":
        builder = SITES.get(spec.traces.site or "")
        if builder is None:
            raise ConfigError(f"unknown site '{spec.traces.site}', expected one of {sorted(SITES)}")
        return builder(spec.policies, spec.seeds, spec.observation.adoptions, master_seed)

    if spec.network is None:
        raise ConfigError(f"scenario file {path} needs a network section unless traces.kind is 'site'")
    net = ParkingNetwork.from_dict(spec.network)
    end = max(spec.departures) + spec.horizon
    if spec.traces.kind == "constant":
        traces = {j: constant_trace(net.prob(j), DAY_MINUTES + end, lot=j) for j in net.lots}
    elif spec.traces.kind == "csv":
        if not spec.traces.path:
            raise ConfigError("traces.kind 'csv' needs traces.path")
        base = os.path.dirname(os.path.abspath(path))
        traces = _csv_traces(os.path.join(base, spec.traces.path), net.n_lots)
    else:
        raise ConfigError(f"unknown traces.kind '{spec.traces.kind}', expected constant, csv or site")

    lam = spec.observation.lambda_per_hour
    rate = {j: float(lam[j - 1]) for j in net.lots} if isinstance(lam, list) else float(lam)
    try:
        scenario = ScenarioConfig(
            network=net,
            traces=traces,
            departures=tuple(spec.departures),
            adoptions=tuple(spec.observation.adoptions),
            arrival_rate_per_hour=rate,
            policies=tuple(PolicySpec.parse(p) for p in spec.policies),
            seeds=spec.seeds,
            master_seed=Config.MASTER_SEED if master_seed is None else master_seed,
            horizon=spec.horizon,
            name=spec.name,
        )
    except ModelAssumptionError as e:
        raise ConfigError(f"scenario file {path} is inconsistent", [str(e)])
    ttd = spec.references.time_to_drive
    if ttd is None:
        ttd = float(min(net.drive(0, j) for j in net.lots))
    logger.info(f"Loaded scenario '{spec.name}' from {path} ({net.n_lots} lots, {len(scenario.policies)} policies)")
    return Site(scenario, ttd, spec.references.transit_time)


def policy_violations(entries: Sequence[Any]) -> List[str]:
    violations = []
    for i, entry in enumerate(entries):
        try:
            PolicySpec.parse(entry)
        except (ConfigError, ModelAssumptionError) as e:
            detail = "; ".join(e.violations) if isinstance(e, ConfigError) and e.violations else str(e)
            violations.append(f"policies[{i}]: {detail}")
    return violations
