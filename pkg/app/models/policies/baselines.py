"""Probability-unaware baselines."""
import logging

import numpy as np

from app.models.core.network import ParkingNetwork
from app.models.core.types import LotIndex, ORIGIN, VehicleState
from .base import Belief, Policy, PolicyKind, lowest_index_argmin
from .registry import register_policy

logger = logging.getLogger(__name__)


def closest_to_destination(net: ParkingNetwork) -> LotIndex:
    return lowest_index_argmin(net.walk_time) + 1


@register_policy(PolicyKind.BASELINE_PATIENT)
class BaselinePatient(Policy):
    """Drives to the lot closest to the destination and waits there until parked.

    The search cap is enforced by the simulator.
    """
    uses_belief = False

    def decide(self, state: VehicleState, net: ParkingNetwork, belief: Belief) -> LotIndex:
        return closest_to_destination(net)


@register_policy(PolicyKind.BASELINE_IMPATIENT)
class BaselineImpatient(Policy):
    """Tries the lot closest to the destination, then the nearest unvisited lot.

    Once every lot has been visited the cycle resets: candidates are all lots,
    without the current one when ``exclude_failed_on_reset`` is set. A
    single-lot network always stays.
    """
    uses_belief = False

    def decide(self, state: VehicleState, net: ParkingNetwork, belief: Belief) -> LotIndex:
        if state.location == ORIGIN:
            return closest_to_destination(net)

        candidates = [j for j in net.lots if j not in state.visited and j != state.location]
        if not candidates:
            if self.spec.exclude_failed_on_reset:
                candidates = [j for j in net.lots if j != state.location]
            else:
                candidates = list(net.lots)
            if not candidates:
                return state.location
            logger.debug(f"Impatient search cycle reset at lot {state.location}")

        times = np.array([net.step_time(state.location, j) for j in candidates])
        return candidates[lowest_index_argmin(times)]
