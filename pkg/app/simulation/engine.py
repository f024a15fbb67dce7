"""Seeded episodes of the parking process against time-varying probabilities.

Each decision epoch the policy picks a lot from its belief, the clock
advances by the step time, and a Bernoulli draw against the true trace value
at the new clock decides the attempt. Beliefs come either from the
connected-user hold-last estimate or, for oracle policies, from the true
traces.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from app.config import Config
from app.errors import ModelAssumptionError
from app.models.core.network import ParkingNetwork
from app.models.core.reward import reward, time_to_arrive
from app.models.core.types import LotIndex, RewardBreakdown, VehicleState
from app.models.observer.sampling import ObservationStream, observe, observe_at
from app.models.observer.traces import ProbabilityTrace
from app.models.policies import Belief, BeliefSource, Policy, PolicyRegistry, PolicySpec
from app.monitoring.metrics import record_episode
from app.utils.seeding import derive_seed, rng

logger = logging.getLogger(__name__)

Streams = Dict[LotIndex, ObservationStream]


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Everything an episode needs besides the policy and the seed.

    ``traces`` maps each lot to its true probability trace on the absolute
    clock (minutes since midnight). Connected-user observations are thinned
    from ``arrivals`` (recorded arrival minutes per lot) when given, otherwise
    drawn as a Poisson process of rate ``arrival_rate_per_hour * adoption``.
    """
    network: ParkingNetwork
    traces: Mapping[LotIndex, ProbabilityTrace]
    departures: Tuple[float, ...] = (480.0,)
    adoptions: Tuple[float, ...] = (0.1, 0.5)
    arrival_rate_per_hour: Union[float, Mapping[LotIndex, float]] = 20.0
    arrivals: Optional[Mapping[LotIndex, np.ndarray]] = None
    policies: Tuple[PolicySpec, ...] = ()
    seeds: int = 5
    master_seed: int = field(default_factory=lambda: Config.MASTER_SEED)
    horizon: float = field(default_factory=lambda: Config.SEARCH_HORIZON_MIN)
    name: str = "scenario"

    def __post_init__(self):
        object.__setattr__(self, "departures", tuple(float(d) for d in self.departures))
        object.__setattr__(self, "adoptions", tuple(float(r) for r in self.adoptions))
        object.__setattr__(self, "policies", tuple(self.policies))
        missing = [j for j in self.network.lots if j not in self.traces]
        if missing:
            raise ModelAssumptionError(f"scenario '{self.name}' has no trace for lots {missing}")
        if not self.departures:
            raise ModelAssumptionError(f"scenario '{self.name}' has no departure times")
        for r in self.adoptions:
            if not 0.0 < r <= 1.0:
                raise ModelAssumptionError(f"adoption rate must lie in (0, 1], got {r}")
        need_from, need_to = min(self.departures), max(self.departures) + self.horizon
        for j in self.network.lots:
            trace = self.traces[j]
            if not trace.covers(need_from, need_to):
                raise ModelAssumptionError(
                    f"trace of lot {j} spans [{trace.start:g}, {trace.end:g}] but departures plus the "
                    f"search horizon need [{need_from:g}, {need_to:g}]"
                )

    def rate_for(self, lot: LotIndex) -> float:
        if isinstance(self.arrival_rate_per_hour, Mapping):
            return float(self.arrival_rate_per_hour[lot])
        return float(self.arrival_rate_per_hour)

    def true_probs(self, clock: float) -> np.ndarray:
        return np.array([self.traces[j].value_at(clock) for j in self.network.lots])


@dataclass(frozen=True)
class Leg:
    """One parking attempt."""
    target: LotIndex
    parked: bool
    breakdown: RewardBreakdown
    clock: float


@dataclass(frozen=True)
class EpisodeResult:
    legs: Tuple[Leg, ...]
    total_minutes: float
    capped: bool
    policy: str
    seed: int
    departure: float = 0.0
    adoption: float = float("nan")

    @property
    def n_attempts(self) -> int:
        return len(self.legs)

    @property
    def first_target(self) -> LotIndex:
        return self.legs[0].target

    @property
    def final_lot(self) -> LotIndex:
        return self.legs[-1].target

    def as_row(self) -> Dict[str, object]:
        return {
            "policy": self.policy,
            "adoption": self.adoption,
            "departure": self.departure,
            "seed": self.seed,
            "total_minutes": self.total_minutes,
            "n_attempts": self.n_attempts,
            "capped": self.capped,
            "first_target": self.first_target,
            "final_lot": self.final_lot,
        }


def build_streams(cfg: ScenarioConfig, adoption: float, seed: int) -> Streams:
    """Connected-user streams of every lot for one episode."""
    streams = {}
    for j in cfg.network.lots:
        trace = cfg.traces[j]
        lot_seed = derive_seed(seed, "lot", j)
        if cfg.arrivals is not None:
            times = np.asarray(cfg.arrivals.get(j, np.empty(0)), dtype=float)
            kept = times[rng(lot_seed, "thin").random(times.size) < adoption]
            streams[j] = observe_at(trace, kept, rate_per_hour=cfg.rate_for(j) * adoption)
        else:
            streams[j] = observe(trace, cfg.rate_for(j), adoption, lot_seed)
    return streams


def _belief(cfg: ScenarioConfig, spec: PolicySpec, streams: Optional[Streams], clock: float) -> Belief:
    if spec.oracle or streams is None:
        return Belief.clamped(cfg.true_probs(clock), BeliefSource.ORACLE_TRUE)
    estimates = [streams[j].estimate_at(clock) for j in cfg.network.lots]
    return Belief.clamped(estimates, BeliefSource.OBSERVED)


def run_episode(cfg: ScenarioConfig, policy: Union[Policy, PolicySpec], seed: int,
                departure: Optional[float] = None, adoption: Optional[float] = None,
                streams: Optional[Streams] = None) -> EpisodeResult:
    """Simulate one trip until the vehicle parks or the patient cap triggers.

    Args:
        cfg: Scenario with network and true traces.
        policy: Policy instance or spec.
        seed: Seed of the success draws (and of the streams when built here).
        departure: Departure minute; the first configured departure by default.
        adoption: Adoption rate for building streams; the first configured one by default.
        streams: Pre-built observation streams shared across policies.

    Raises:
        TraceExhaustedError: if the search outlives a trace.
    """
    if isinstance(policy, PolicySpec):
        policy = PolicyRegistry.create(policy)
    spec = policy.spec
    net = cfg.network
    departure = cfg.departures[0] if departure is None else float(departure)
    adoption = cfg.adoptions[0] if adoption is None else float(adoption)
    if streams is None and not spec.oracle and policy.uses_belief:
        streams = build_streams(cfg, adoption, seed)

    draws = rng(seed, "attempts")
    all_lots = frozenset(net.lots)
    state = VehicleState.origin(clock=departure)
    legs: List[Leg] = []
    capped = False
    fixed_belief = None if policy.uses_belief else Belief(net.initial_probs)

    while True:
        belief = fixed_belief if fixed_belief is not None else _belief(cfg, spec, streams, state.clock)
        target = policy.decide(state, net, belief)
        clock = state.clock + net.step_time(state.location, target)
        # an attempt that would land past the cap is never made; the first attempt always is
        if spec.cap is not None and legs and clock - departure > spec.cap:
            capped = True
            break
        p_true = cfg.traces[target].value_at(clock)
        parked = bool(draws.random() < p_true)
        legs.append(Leg(target, parked, reward(state.location, target, parked, net), clock))

        # a full cycle restarts the visited set with the lot just tried
        visited = frozenset({target}) if state.visited >= all_lots else state.visited | {target}
        state = state.moved(target, parked, clock, visited)
        if state.is_terminal:
            break

    if capped:
        total = spec.cap + net.walk(legs[-1].target)
        logger.warning(f"{policy.name} capped at {spec.cap:g} min after {len(legs)} attempts (seed {seed})")
    else:
        total = time_to_arrive([leg.breakdown for leg in legs])
    record_episode(policy.name, capped)
    return EpisodeResult(tuple(legs), total, capped, policy.name, seed, departure, adoption)
