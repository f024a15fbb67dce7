"""Closed-form values of the patient and cluster strategies.

The patient strategy drives to one lot and retries every ``wait_time``
minutes until it parks, so the number of flips is geometric in ``p``. A
cluster strategy cycles among mutually close lots and is treated as one
joint Bernoulli trial per cycle.
"""
import logging
from dataclasses import dataclass
from itertools import permutations
from typing import FrozenSet, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from app.errors import ModelAssumptionError
from app.models.core.network import ParkingNetwork
from app.models.core.types import LotIndex, ORIGIN, WaitConvention

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StrategyValue:
    """Expected time-to-arrive of a strategy aimed at a lot or a cluster."""
    expected_time: float
    target: Union[LotIndex, str]
    convention: WaitConvention = WaitConvention.CHARGE_FIRST_FLIP


def _check_prob(p: float, what: str) -> None:
    if not (0.0 < p <= 1.0):
        raise ModelAssumptionError(f"{what} must lie in (0, 1], got {p}")


def _wait_term(wait: float, p: float, convention: WaitConvention) -> float:
    if convention is WaitConvention.CHARGE_FIRST_FLIP:
        return wait / p
    return wait * (1.0 / p - 1.0)


def patient_expected_time(net: ParkingNetwork, lot: LotIndex,
                          convention: WaitConvention = WaitConvention.CHARGE_FIRST_FLIP) -> float:
    """Expected time-to-arrive when driving to ``lot`` and waiting there until parked.

    Args:
        net: Network supplying times and the lot probability.
        lot: Target lot, 1..N.
        convention: Whether the first flip is charged a wait.

    Returns:
        Minutes from departure to arrival at the destination.
    """
    net.check_lot(lot)
    p = net.prob(lot)
    _check_prob(p, f"probability of lot {lot}")
    return net.drive(ORIGIN, lot) + net.walk(lot) + _wait_term(net.wait_time, p, convention)


def patient_values(net: ParkingNetwork,
                   convention: WaitConvention = WaitConvention.CHARGE_FIRST_FLIP) -> np.ndarray:
    """Patient values of every lot, index ``lot - 1``."""
    return np.array([patient_expected_time(net, j, convention) for j in net.lots])


def best_patient_lot(net: ParkingNetwork,
                     convention: WaitConvention = WaitConvention.CHARGE_FIRST_FLIP) -> Tuple[LotIndex, float]:
    """Lot with the lowest patient value and that value; ties go to the lowest index."""
    values = patient_values(net, convention)
    best = int(np.argmin(values))
    return best + 1, float(values[best])


@dataclass(frozen=True)
class Cluster:
    """A set of mutually close lots searched by cycling.

    ``cycle_time`` is the drive between consecutive members, ``t_to_cluster``
    the drive from the origin, ``t_cluster_to_dest`` the walk to the
    destination and ``wait_time`` the retry wait at a single lot.
    """
    members: FrozenSet[LotIndex]
    cycle_time: float
    t_to_cluster: float
    t_cluster_to_dest: float
    wait_time: float = 5.0

    def __post_init__(self):
        if not self.members:
            raise ModelAssumptionError("a cluster needs at least one member lot")
        object.__setattr__(self, "members", frozenset(int(m) for m in self.members))
        if not self.wait_time > 0:
            raise ModelAssumptionError(f"cluster wait_time must be > 0, got {self.wait_time}")
        for name in ("cycle_time", "t_to_cluster", "t_cluster_to_dest"):
            if getattr(self, name) < 0:
                raise ModelAssumptionError(f"cluster {name} must be >= 0, got {getattr(self, name)}")

    @property
    def ordered(self) -> List[LotIndex]:
        return sorted(self.members)

    @property
    def label(self) -> str:
        return "cluster(" + ",".join(str(m) for m in self.ordered) + ")"

    @classmethod
    def from_network(cls, net: ParkingNetwork, members: Iterable[LotIndex]) -> "Cluster":
        """Derive the cluster times from the network with conservative (max) aggregates."""
        lots = sorted(set(members))
        if not lots:
            raise ModelAssumptionError("a cluster needs at least one member lot")
        for lot in lots:
            net.check_lot(lot)
        pairs = [net.drive(a, b) for a, b in permutations(lots, 2)]
        cycle = max(pairs) if pairs else net.wait_time
        return cls(
            members=frozenset(lots),
            cycle_time=cycle,
            t_to_cluster=max(net.drive(ORIGIN, m) for m in lots),
            t_cluster_to_dest=max(net.walk(m) for m in lots),
            wait_time=net.wait_time,
        )


def validate_cluster(net: ParkingNetwork, members: Iterable[LotIndex]) -> List[str]:
    """Violations of the cluster conditions for ``members`` on ``net``; empty when valid."""
    lots = sorted(set(members))
    violations = []
    if len(lots) < 2:
        violations.append(f"a cluster needs at least 2 lots, got {len(lots)}")
    out_of_range = [m for m in lots if not (1 <= m <= net.n_lots)]
    if out_of_range:
        violations.append(f"lots {out_of_range} are not in 1..{net.n_lots}")
        return violations
    for a, b in permutations(lots, 2):
        t = net.drive(a, b)
        if not t < net.wait_time:
            violations.append(
                f"drive {a}->{b} is {t:g} min, not below the wait time {net.wait_time:g} min"
            )
    return violations


def joint_success(probs: Sequence[float]) -> float:
    """Probability that at least one lot of a cycle admits parking."""
    arr = np.asarray(probs, dtype=float)
    return float(1.0 - np.prod(1.0 - arr))


def cluster_expected_time(cluster: Cluster, probs: Union[Sequence[float], Mapping[LotIndex, float]]) -> float:
    """Expected time-to-arrive of cycling through ``cluster``.

    Args:
        cluster: The cluster; its ``ordered`` members fix the order of ``probs``.
        probs: One probability per member, either aligned with ``cluster.ordered``
            or keyed by lot index.

    Returns:
        ``t_to_cluster + t_cluster_to_dest + min(wait, cycle) / P(any member free)``.
    """
    if isinstance(probs, Mapping):
        values = [probs[m] for m in cluster.ordered]
    else:
        values = list(probs)
    if len(values) != len(cluster.members):
        raise ModelAssumptionError(
            f"cluster has {len(cluster.members)} members but {len(values)} probabilities were given"
        )
    for lot, p in zip(cluster.ordered, values):
        _check_prob(p, f"probability of cluster lot {lot}")
    joint = joint_success(values)
    return cluster.t_to_cluster + cluster.t_cluster_to_dest + min(cluster.wait_time, cluster.cycle_time) / joint


def cluster_value(net: ParkingNetwork, members: Iterable[LotIndex]) -> StrategyValue:
    """Cluster strategy value using times and probabilities taken from ``net``."""
    cluster = Cluster.from_network(net, members)
    t = cluster_expected_time(cluster, {m: net.prob(m) for m in cluster.ordered})
    return StrategyValue(expected_time=t, target=cluster.label)
