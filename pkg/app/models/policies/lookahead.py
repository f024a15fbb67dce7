"""Probability-aware lookahead policies (PA-1, PA-2, PA-3).

The one-step cost inflates the step time by the expected number of flips::

    c1(i, j) = t(i, j) / p_j + walk_j

Deeper costs pay the step once, walk with probability p_j and otherwise
continue from j with the best cost one level shallower::

    ck(i, j) = t(i, j) + p_j * walk_j + (1 - p_j) * min_l c(k-1)(j, l)

``t(i, i)`` is the wait time. Policies re-plan at every decision epoch.
"""
import logging

import numpy as np

from app.errors import ModelAssumptionError
from app.models.core.network import ParkingNetwork
from app.models.core.types import LotIndex, VehicleState
from .base import Belief, Policy, PolicyKind, lowest_index_argmin
from .registry import register_policy

logger = logging.getLogger(__name__)

MAX_STEPS = 3


def pa_cost_matrix(steps: int, net: ParkingNetwork, belief: Belief) -> np.ndarray:
    """(N+1) x N matrix of k-step costs; row i is the location (0 = origin), column j-1 the lot j."""
    if steps not in range(1, MAX_STEPS + 1):
        raise ModelAssumptionError(f"lookahead depth must be between 1 and {MAX_STEPS}, got {steps}")
    p = np.asarray(belief.probs, dtype=float)
    if p.shape != (net.n_lots,):
        raise ModelAssumptionError(f"belief has {p.size} entries for {net.n_lots} lots")
    if np.any(p <= 0.0):
        raise ModelAssumptionError("lookahead costs need strictly positive probabilities")

    step = net.step_matrix()
    walk = net.walk_time
    cost = step / p + walk
    for _ in range(steps - 1):
        # best continuation from each lot j, using rows 1..N of the shallower cost
        best_next = cost[1:].min(axis=1)
        cost = step + p * walk + (1.0 - p) * best_next
    return cost


def pa_cost(steps: int, from_lot: LotIndex, to_lot: LotIndex, net: ParkingNetwork, belief: Belief) -> float:
    """k-step cost of attempting ``to_lot`` from ``from_lot``."""
    net.check_lot(from_lot, allow_origin=True)
    net.check_lot(to_lot)
    return float(pa_cost_matrix(steps, net, belief)[from_lot, to_lot - 1])


@register_policy(PolicyKind.PA)
class LookaheadPolicy(Policy):
    """Attempts the lot with the lowest k-step cost from the current location."""

    def decide(self, state: VehicleState, net: ParkingNetwork, belief: Belief) -> LotIndex:
        costs = pa_cost_matrix(self.spec.steps, net, belief)[state.location]
        return lowest_index_argmin(costs) + 1
